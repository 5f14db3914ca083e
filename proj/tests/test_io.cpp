#include "helpers.hpp"

#include <compcomp/errors.hpp>
#include <compcomp/io.hpp>

#include <doctest.h>

#include <sstream>

using namespace compcomp;

TEST_SUITE("io") {

TEST_CASE("trace csv schema and round trip") {
  Trace t;
  for (int k = 0; k < 3; ++k) {
    IterationRecord r;
    r.k = k;
    r.a = 1.0 / 3.0 + k;
    r.A = 1.0 + k * k;
    r.M = 0.1;
    r.f = 1e-300;
    r.psi = -0.0;
    r.obj = 2.0 / 7.0;
    r.doublings = k;
    r.elapsed_ms = 0.5;
    t.rows.push_back(r);
  }
  std::stringstream ss;
  write_trace_csv(ss, t);
  std::string header;
  std::getline(ss, header);
  CHECK(header == "k,a_k,A_k,M_k,f,psi,obj,grad_dual_norm,doublings,elapsed_ms");
  ss.seekg(0);
  const Trace back = read_trace_csv(ss);
  REQUIRE(back.rows.size() == 3);
  for (int k = 0; k < 3; ++k) {
    CHECK(back.rows[k].a == t.rows[k].a);
    CHECK(back.rows[k].obj == t.rows[k].obj);
    CHECK(back.rows[k].f == t.rows[k].f);
    CHECK(std::isnan(back.rows[k].grad_dual_norm));
    CHECK(back.rows[k].doublings == k);
  }
}

TEST_CASE("trace jsonl") {
  Trace t;
  t.header.oracle = "least_squares";
  t.header.m0 = 2;
  t.rows.resize(2);
  std::stringstream ss;
  write_trace_jsonl(ss, t);
  std::string line;
  int n = 0;
  while (std::getline(ss, line))
    ++n;
  CHECK(n == 3);
}

TEST_CASE("csv matrices") {
  std::istringstream ok("# comment\n1, 2,3\n4,5,6e-1\n\n");
  const Matrix M = read_matrix_csv(ok);
  CHECK(M.rows() == 2);
  CHECK(M.cols() == 3);
  CHECK(M(1, 2) == doctest::Approx(0.6));

  std::istringstream ragged("1,2\n3\n");
  CHECK_THROWS_WITH_AS(read_matrix_csv(ragged), doctest::Contains("line 2"), InvalidInput);
  std::istringstream junk("1,2\n3,x\n");
  CHECK_THROWS_WITH_AS(read_matrix_csv(junk), doctest::Contains("line 2, column 2"), InvalidInput);
}

TEST_CASE("matrix market") {
  std::istringstream coord("%%MatrixMarket matrix coordinate real general\n% c\n2 3 2\n1 1 1.5\n2 3 -2\n");
  const Matrix C = read_matrix_market(coord);
  CHECK(C(0, 0) == 1.5);
  CHECK(C(1, 2) == -2);
  CHECK(C.sum() == doctest::Approx(-0.5));

  std::istringstream arr("%%MatrixMarket matrix array real general\n2 2\n1\n2\n3\n4\n");
  const Matrix R = read_matrix_market(arr);
  CHECK(R(1, 0) == 2);
  CHECK(R(0, 1) == 3);

  std::istringstream sym("%%MatrixMarket matrix coordinate real symmetric\n2 2 1\n2 1 7\n");
  CHECK(read_matrix_market(sym)(0, 1) == 7);

  std::istringstream oob("%%MatrixMarket matrix coordinate real general\n2 2 1\n3 1 7\n");
  CHECK_THROWS_WITH_AS(read_matrix_market(oob), doctest::Contains("line 3"), InvalidInput);
  std::istringstream nobanner("2 2 1\n");
  CHECK_THROWS_AS(read_matrix_market(nobanner), InvalidInput);
}

} // TEST_SUITE
