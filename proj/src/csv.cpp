#include "switchbound/csv.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace switchbound {

std::string format_double(double value) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

void write_csv(std::ostream& os, const std::vector<std::string>& header,
               const std::vector<Eigen::VectorXd>& rows) {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (i) os << ',';
    os << header[i];
  }
  os << '\n';
  for (const auto& row : rows) {
    for (Eigen::Index i = 0; i < row.size(); ++i) {
      if (i) os << ',';
      os << format_double(row[i]);
    }
    os << '\n';
  }
}

void write_csv_file(const std::string& path, const std::vector<std::string>& header,
                    const std::vector<Eigen::VectorXd>& rows) {
  std::ofstream out(path, std::ios::binary);  // binary: keep UNIX newlines everywhere
  if (!out) throw std::invalid_argument("csv: cannot write " + path);
  write_csv(out, header, rows);
}

std::vector<std::string> state_header(int n) {
  std::vector<std::string> h;
  h.reserve(static_cast<std::size_t>(n));
  for (int i = 1; i <= n; ++i) h.push_back("x" + std::to_string(i));
  return h;
}

std::vector<std::string> vech_header(int n) {
  std::vector<std::string> h;
  for (int j = 1; j <= n; ++j) {
    for (int i = j; i <= n; ++i) {
      h.push_back("p_" + std::to_string(i) + "_" + std::to_string(j));
    }
  }
  return h;
}

std::vector<Eigen::VectorXd> read_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("csv: cannot open " + path);
  std::vector<Eigen::VectorXd> rows;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (first) {  // header
      first = false;
      continue;
    }
    if (line.empty()) continue;
    std::vector<double> vals;
    const char* ptr = line.data();
    const char* end = line.data() + line.size();
    while (ptr < end) {
      double v = 0.0;
      const auto res = std::from_chars(ptr, end, v);
      if (res.ec != std::errc()) throw std::invalid_argument("csv: bad number in " + path);
      vals.push_back(v);
      ptr = res.ptr;
      if (ptr < end && *ptr == ',') ++ptr;
    }
    rows.push_back(Eigen::Map<const Eigen::VectorXd>(vals.data(), vals.size()));
  }
  return rows;
}

}  // namespace switchbound
