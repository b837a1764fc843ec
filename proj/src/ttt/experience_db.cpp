#include "lerpalab/ttt/experience_db.hpp"

#include <algorithm>
#include <stdexcept>

namespace lerpalab::ttt {

ExperienceDB::ExperienceDB(std::size_t capacity) : capacity_(capacity) {
  if (capacity == 0) throw std::invalid_argument("experience database capacity must be positive");
}

std::string ExperienceDB::key_of(const std::vector<double>& features) {
  return std::string(reinterpret_cast<const char*>(features.data()),
                     features.size() * sizeof(double));
}

void ExperienceDB::insert(std::vector<double> features, std::vector<double> target, bool fact) {
  auto key = key_of(features);
  if (auto it = index_.find(key); it != index_.end()) {
    entries_.erase(it->second);
    index_.erase(it);
  } else if (entries_.size() == capacity_) {
    index_.erase(key_of(entries_.front().features));
    entries_.pop_front();
  }
  entries_.push_back({std::move(features), std::move(target), fact});
  index_.emplace(std::move(key), std::prev(entries_.end()));
}

std::size_t ExperienceDB::fact_count() const {
  return static_cast<std::size_t>(
      std::count_if(entries_.begin(), entries_.end(), [](const Experience& e) { return e.fact; }));
}

void ExperienceDB::append_to(std::vector<net::TrainingPair>& batch) const {
  for (const auto& e : entries_) batch.push_back({e.features, e.target});
}

std::vector<net::TrainingPair> FactOpinionDB::batch(double fact_share) const {
  std::vector<net::TrainingPair> out;
  out.reserve(facts.size() + opinions.size());
  facts.append_to(out);
  opinions.append_to(out);
  if (facts.empty() || opinions.empty()) return out;
  const double n = static_cast<double>(out.size());
  const double fact_w = fact_share * n / static_cast<double>(facts.size());
  const double opinion_w = (1.0 - fact_share) * n / static_cast<double>(opinions.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i].weight = i < facts.size() ? fact_w : opinion_w;
  return out;
}

}  // namespace lerpalab::ttt
