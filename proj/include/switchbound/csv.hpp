#pragma once

#include <Eigen/Dense>
#include <ostream>
#include <string>
#include <vector>

namespace switchbound {

/// Shortest decimal representation that parses back to the same double.
std::string format_double(double value);

/// Write one CSV with a header row and one row per vector. UNIX newlines,
/// full round-trip precision.
void write_csv(std::ostream& os, const std::vector<std::string>& header,
               const std::vector<Eigen::VectorXd>& rows);

void write_csv_file(const std::string& path, const std::vector<std::string>& header,
                    const std::vector<Eigen::VectorXd>& rows);

/// Column names x1..xn for state vectors.
std::vector<std::string> state_header(int n);

/// Column names p_i_j for vech(P) in lower-triangular column-major order.
std::vector<std::string> vech_header(int n);

/// Parse a CSV produced by write_csv (header skipped).
std::vector<Eigen::VectorXd> read_csv_file(const std::string& path);

}  // namespace switchbound
