#pragma once

#include <cstddef>
#include <list>
#include <string>
#include <unordered_map>
#include <vector>

#include "lerpalab/net/network.hpp"

namespace lerpalab::ttt {

struct Experience {
  std::vector<double> features;
  std::vector<double> target;
  bool fact = false;  // target came from a finished game, not a bootstrap
};

// Bounded store of (features, target) pairs, oldest first. Inserting features
// already present replaces the old entry and moves it to the newest slot; a
// full store evicts its oldest entry.
class ExperienceDB {
 public:
  explicit ExperienceDB(std::size_t capacity);

  void insert(std::vector<double> features, std::vector<double> target, bool fact = false);

  std::size_t size() const { return entries_.size(); }
  std::size_t capacity() const { return capacity_; }
  bool empty() const { return entries_.empty(); }
  std::size_t fact_count() const;
  const std::list<Experience>& entries() const { return entries_; }

  void append_to(std::vector<net::TrainingPair>& batch) const;

 private:
  static std::string key_of(const std::vector<double>& features);

  std::size_t capacity_;
  std::list<Experience> entries_;
  std::unordered_map<std::string, std::list<Experience>::iterator> index_;
};

// Terminal-outcome targets and bootstrapped targets kept apart, each bounded
// on its own.
struct FactOpinionDB {
  ExperienceDB facts;
  ExperienceDB opinions;

  FactOpinionDB(std::size_t fact_capacity, std::size_t opinion_capacity)
      : facts(fact_capacity), opinions(opinion_capacity) {}

  // Union of both stores, weighted so facts carry `fact_share` of the total
  // loss whenever both are non-empty.
  std::vector<net::TrainingPair> batch(double fact_share) const;
};

}  // namespace lerpalab::ttt
