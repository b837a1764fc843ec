#include "lerpalab/net/snapshot.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <vector>

namespace lerpalab::net {
namespace {

void append_double(std::string& out, double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  out.append(buf, res.ptr);
}

void append_matrix(std::string& out, const Matrix& m) {
  for (std::size_t r = 0; r < m.rows(); ++r) {
    auto row = m.row(r);
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) out.push_back(' ');
      append_double(out, row[c]);
    }
    out.push_back('\n');
  }
}

std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  while (!text.empty()) {
    auto nl = text.find('\n');
    auto line = text.substr(0, nl);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
    if (nl == std::string_view::npos) break;
    text.remove_prefix(nl + 1);
  }
  while (!lines.empty() && lines.back().empty()) lines.pop_back();
  return lines;
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t') ++j;
    if (j > i) fields.push_back(line.substr(i, j - i));
    i = j;
  }
  return fields;
}

template <typename T>
T parse_number(std::string_view field, std::size_t line_no) {
  T value{};
  auto res = std::from_chars(field.data(), field.data() + field.size(), value);
  if (res.ec != std::errc() || res.ptr != field.data() + field.size()) {
    throw SnapshotError("line " + std::to_string(line_no) + ": bad number '" +
                        std::string(field) + "'");
  }
  return value;
}

void read_matrix(const std::vector<std::string_view>& lines, std::size_t first, Matrix& m) {
  for (std::size_t r = 0; r < m.rows(); ++r) {
    const std::size_t line_no = first + r + 1;
    auto fields = split_fields(lines[first + r]);
    if (fields.size() != m.cols()) {
      throw SnapshotError("line " + std::to_string(line_no) + ": expected " +
                          std::to_string(m.cols()) + " values");
    }
    for (std::size_t c = 0; c < m.cols(); ++c) m(r, c) = parse_number<double>(fields[c], line_no);
  }
}

}  // namespace

std::string serialize_network(const Network& net) {
  std::string out;
  out.append(kSnapshotMagic);
  out.push_back('\n');
  out += std::to_string(net.n_in) + ' ' + std::to_string(net.n_hidden) + ' ' +
         std::to_string(net.n_out) + ' ' + to_string(net.output_activation) + '\n';
  append_matrix(out, net.hidden_weights);
  append_matrix(out, net.output_weights);
  return out;
}

Network parse_network(std::string_view text) {
  auto lines = split_lines(text);
  if (lines.empty() || lines[0] != kSnapshotMagic) throw SnapshotError("missing snapshot magic");
  if (lines.size() < 2) throw SnapshotError("missing shape line");
  auto shape = split_fields(lines[1]);
  if (shape.size() != 4) throw SnapshotError("line 2: expected 'n_in n_hidden n_out activation'");

  Network net;
  net.n_in = parse_number<std::size_t>(shape[0], 2);
  net.n_hidden = parse_number<std::size_t>(shape[1], 2);
  net.n_out = parse_number<std::size_t>(shape[2], 2);
  if (net.n_in == 0 || net.n_hidden == 0 || net.n_out == 0)
    throw SnapshotError("line 2: layer sizes must be at least 1");
  try {
    net.output_activation = parse_activation(std::string(shape[3]));
  } catch (const std::invalid_argument& e) {
    throw SnapshotError(std::string("line 2: ") + e.what());
  }
  net.hidden_weights = Matrix(net.n_hidden, net.n_in + 1);
  net.output_weights = Matrix(net.n_out, net.n_hidden + 1);

  const std::size_t expected = 2 + net.n_hidden + net.n_out;
  if (lines.size() != expected) {
    throw SnapshotError("expected " + std::to_string(expected) + " lines, found " +
                        std::to_string(lines.size()));
  }
  read_matrix(lines, 2, net.hidden_weights);
  read_matrix(lines, 2 + net.n_hidden, net.output_weights);
  return net;
}

void save_network(const Network& net, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw SnapshotError("cannot open '" + path.string() + "' for writing");
  out << serialize_network(net);
  if (!out) throw SnapshotError("failed writing '" + path.string() + "'");
}

Network load_network(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw SnapshotError("cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_network(ss.str());
}

}  // namespace lerpalab::net
