#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "volterra/simulate.hpp"

namespace volterra::csv {

// Shortest round-trip decimal form, so written files reproduce values exactly.
std::string format_number(double x);

// `path_id,t,value`, path-major.
void write_paths(std::ostream& out, const PathEnsemble& ens);
// Validates the header, contiguous path ids and identical time columns.
PathEnsemble read_paths(std::istream& in);

// `i,j,value`, row-major, nonzero entries only.
void write_matrix(std::ostream& out, const Eigen::MatrixXd& m);
Eigen::MatrixXd read_matrix(std::istream& in, long rows, long cols);

// Splits one CSV line on commas (no quoting in any schema used here).
std::vector<std::string> split(const std::string& line);
double parse_double(const std::string& s);
long long parse_int(const std::string& s);

}  // namespace volterra::csv
