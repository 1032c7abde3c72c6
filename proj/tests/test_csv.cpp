#include <doctest.h>

#include <sstream>

#include "volterra/csv.hpp"
#include "volterra/error.hpp"

using namespace volterra;

TEST_CASE("path CSV roundtrip is exact") {
  PathEnsemble ens;
  ens.grid = make_grid(1.0, 3);
  ens.paths.resize(2, 4);
  ens.paths << 0.0, 0.1, -1.0 / 3.0, 2.5e-17, 0.0, 1e300, 0.2, -0.7;
  std::stringstream io;
  csv::write_paths(io, ens);
  const PathEnsemble back = csv::read_paths(io);
  CHECK(back.paths == ens.paths);
  CHECK(back.grid.nodes() == ens.grid.nodes());
}

TEST_CASE("path CSV validation") {
  std::istringstream bad_header("id,t,value\n");
  CHECK_THROWS_AS(csv::read_paths(bad_header), InvalidArgument);
  std::istringstream gap("path_id,t,value\n0,0,0\n0,1,1\n2,0,0\n2,1,1\n");
  CHECK_THROWS_AS(csv::read_paths(gap), InvalidArgument);
  std::istringstream times("path_id,t,value\n0,0,0\n0,1,1\n1,0,0\n1,0.5,1\n");
  CHECK_THROWS_AS(csv::read_paths(times), InvalidArgument);
  std::istringstream shortp("path_id,t,value\n0,0,0\n0,1,1\n1,0,0\n");
  CHECK_THROWS_AS(csv::read_paths(shortp), InvalidArgument);
  std::istringstream junk("path_id,t,value\n0,0,x\n");
  CHECK_THROWS_AS(csv::read_paths(junk), InvalidArgument);
  std::istringstream empty("path_id,t,value\n");
  CHECK(csv::read_paths(empty).count() == 0);
}

TEST_CASE("matrix CSV roundtrip") {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(3, 2);
  m(0, 1) = 0.5;
  m(2, 0) = -1.0 / 7.0;
  std::stringstream io;
  csv::write_matrix(io, m);
  CHECK(csv::read_matrix(io, 3, 2) == m);
  std::istringstream oob("i,j,value\n3,0,1\n");
  CHECK_THROWS_AS(csv::read_matrix(oob, 3, 2), InvalidArgument);
}
