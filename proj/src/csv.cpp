#include "volterra/csv.hpp"

#include <charconv>
#include <istream>
#include <ostream>

#include "volterra/error.hpp"

namespace volterra::csv {

std::string format_number(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> parts;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      parts.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur.push_back(c);
    }
  }
  parts.push_back(cur);
  return parts;
}

double parse_double(const std::string& s) {
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size())
    throw InvalidArgument("not a number: '" + s + "'");
  return v;
}

long long parse_int(const std::string& s) {
  long long v = 0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size())
    throw InvalidArgument("not an integer: '" + s + "'");
  return v;
}

void write_paths(std::ostream& out, const PathEnsemble& ens) {
  out << "path_id,t,value\n";
  std::vector<std::string> times;
  for (double t : ens.grid.nodes()) times.push_back(format_number(t));
  for (long p = 0; p < ens.paths.rows(); ++p)
    for (long i = 0; i < ens.paths.cols(); ++i)
      out << p << ',' << times[static_cast<std::size_t>(i)] << ','
          << format_number(ens.paths(p, i)) << '\n';
}

PathEnsemble read_paths(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || split(line) != std::vector<std::string>{"path_id", "t", "value"})
    throw InvalidArgument("path CSV must start with header path_id,t,value");
  std::vector<double> times;
  std::vector<std::vector<double>> rows;
  long long current = -1;
  std::size_t pos = 0;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line == "\r") continue;
    const auto f = split(line);
    if (f.size() != 3) throw InvalidArgument("path CSV line " + std::to_string(lineno) + ": expected 3 fields");
    const long long id = parse_int(f[0]);
    const double t = parse_double(f[1]);
    const double v = parse_double(f[2]);
    if (id != current) {
      if (id != current + 1) throw InvalidArgument("path CSV: path ids must be contiguous from 0");
      if (current >= 0 && pos != times.size())
        throw InvalidArgument("path CSV: path " + std::to_string(current) + " is incomplete");
      current = id;
      pos = 0;
      rows.emplace_back();
    }
    if (current == 0) {
      times.push_back(t);
    } else if (pos >= times.size() || times[pos] != t) {
      throw InvalidArgument("path CSV line " + std::to_string(lineno) + ": time column differs from path 0");
    }
    rows.back().push_back(v);
    ++pos;
  }
  if (current >= 0 && pos != times.size()) throw InvalidArgument("path CSV: last path is incomplete");
  PathEnsemble ens;
  // Header only: an empty ensemble without a grid.
  if (rows.empty()) return ens;
  ens.grid = TimeGrid::from_nodes(times);
  ens.paths.resize(static_cast<long>(rows.size()), static_cast<long>(times.size()));
  for (std::size_t p = 0; p < rows.size(); ++p)
    for (std::size_t i = 0; i < times.size(); ++i)
      ens.paths(static_cast<long>(p), static_cast<long>(i)) = rows[p][i];
  ens.method = "csv";
  return ens;
}

void write_matrix(std::ostream& out, const Eigen::MatrixXd& m) {
  out << "i,j,value\n";
  for (long i = 0; i < m.rows(); ++i)
    for (long j = 0; j < m.cols(); ++j)
      if (m(i, j) != 0.0) out << i << ',' << j << ',' << format_number(m(i, j)) << '\n';
}

Eigen::MatrixXd read_matrix(std::istream& in, long rows, long cols) {
  std::string line;
  if (!std::getline(in, line) || split(line) != std::vector<std::string>{"i", "j", "value"})
    throw InvalidArgument("matrix CSV must start with header i,j,value");
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(rows, cols);
  while (std::getline(in, line)) {
    if (line.empty() || line == "\r") continue;
    const auto f = split(line);
    if (f.size() != 3) throw InvalidArgument("matrix CSV: expected 3 fields");
    const long long i = parse_int(f[0]);
    const long long j = parse_int(f[1]);
    if (i < 0 || j < 0 || i >= rows || j >= cols) throw InvalidArgument("matrix CSV: index out of range");
    m(i, j) = parse_double(f[2]);
  }
  return m;
}

}  // namespace volterra::csv
