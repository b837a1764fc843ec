#pragma once

// Text snapshot format:
//   LERPALAB-NET v1
//   n_in n_hidden n_out activation
//   <hidden_weights, one row per line>
//   <output_weights, one row per line>
// Values are written with 17 significant digits so parse(serialize(n)) == n.

#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>

#include "lerpalab/net/network.hpp"

namespace lerpalab::net {

class SnapshotError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr std::string_view kSnapshotMagic = "LERPALAB-NET v1";

std::string serialize_network(const Network& net);
Network parse_network(std::string_view text);

void save_network(const Network& net, const std::filesystem::path& path);
Network load_network(const std::filesystem::path& path);

}  // namespace lerpalab::net
