#include "doctest.h"
#include "rlie/liecore.hpp"

using namespace rlie;

namespace {

LieAlgebra sl2(std::uint32_t p) {
  PrimeField F(p);
  BracketTable t;
  t[{0, 1}] = {{0, F.from_int(-2)}};
  t[{0, 2}] = {{1, 1}};
  t[{1, 2}] = {{2, F.from_int(-2)}};
  return LieAlgebra(F, {"e", "h", "f"}, t);
}

// e_i = x^(i+1) d, i = -1..p-2, [e_i, e_j] = (j - i) e_{i+j}
LieAlgebra witt1(std::uint32_t p) {
  PrimeField F(p);
  BracketTable t;
  const int lo = -1, hi = static_cast<int>(p) - 2;
  std::vector<std::string> labels;
  for (int i = lo; i <= hi; ++i) labels.push_back("e" + std::to_string(i));
  for (int i = lo; i <= hi; ++i)
    for (int j = i + 1; j <= hi; ++j)
      if (i + j >= lo && i + j <= hi && F.from_int(j - i))
        t[{static_cast<std::size_t>(i - lo), static_cast<std::size_t>(j - lo)}] = {
            {static_cast<std::uint32_t>(i + j - lo), F.from_int(j - i)}};
  return LieAlgebra(F, labels, t);
}

LieAlgebra heisenberg(std::uint32_t p) {
  BracketTable t;
  t[{0, 1}] = {{2, 1}};
  return LieAlgebra(PrimeField(p), {"x", "y", "z"}, t);
}

// Direct sum of two copies of L with basis (a_i + b_i, a_i - b_i); not simple,
// yet every basis vector generates the whole algebra as an ideal.
LieAlgebra twisted_double(const LieAlgebra& L) {
  const PrimeField& F = L.field();
  const std::size_t n = L.dim();
  // u_i = a_i + b_i, v_i = a_i - b_i; [u_i,u_j] = sum c (u_k), [u_i,v_j] = sum c v_k, [v_i,v_j] = sum c u_k
  BracketTable t;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      for (int kind = 0; kind < 3; ++kind) {
        std::size_t a = i, b = j, off = 0;
        if (kind == 1) b = j + n, off = n;
        if (kind == 2) a = i + n, b = j + n;
        if (a >= b) continue;
        SparseVec v;
        for (const auto& term : L.bracket(i, j)) v.push_back({static_cast<std::uint32_t>(term.index + off), term.coeff});
        if (!v.empty()) t[{a, b}] = v;
      }
    }
  std::vector<std::string> labels;
  for (const auto& l : L.labels()) labels.push_back("u_" + l);
  for (const auto& l : L.labels()) labels.push_back("v_" + l);
  return LieAlgebra(F, labels, t);
}

}  // namespace

TEST_CASE("constructor validates the table") {
  PrimeField F(5);
  BracketTable bad;
  bad[{1, 0}] = {{0, 1}};
  CHECK_THROWS_AS(LieAlgebra(F, {"a", "b"}, bad), InputError);
  CHECK_THROWS_AS(LieAlgebra(F, {"a", "a"}, {}), InputError);
  BracketTable out;
  out[{0, 1}] = {{5, 1}};
  CHECK_THROWS_AS(LieAlgebra(F, {"a", "b"}, out), InputError);
}

TEST_CASE("axioms hold for sl2, W(1;1) and Heisenberg") {
  for (std::uint32_t p : {3u, 5u, 7u}) {
    CHECK(verify_lie(sl2(p)).ok);
    CHECK(verify_lie(witt1(p)).ok);
    CHECK(verify_lie(heisenberg(p)).ok);
  }
}

TEST_CASE("a single sign flip breaks Jacobi at the only triple") {
  PrimeField F(5);
  BracketTable t = sl2(5).brackets();
  t[{1, 2}] = {{2, 2}};
  const auto rep = verify_lie(LieAlgebra(F, {"e", "h", "f"}, t));
  REQUIRE_FALSE(rep.ok);
  REQUIRE(rep.failures.size() == 1);
  CHECK(rep.failures[0].find("(e,h,f)") != std::string::npos);
}

TEST_CASE("derived series, center and ideals") {
  const LieAlgebra H = heisenberg(5);
  const auto series = derived_series(H);
  REQUIRE(series.size() == 3);
  CHECK(series[1].dim() == 1);
  CHECK(series[2].dim() == 0);
  CHECK(center(H).dim() == 1);
  CHECK(center(sl2(5)).dim() == 0);
  CHECK(derived_algebra(sl2(5), SubspaceBasis::whole(PrimeField(5), 3)).dim() == 3);
  // sl2 in characteristic 2 is nilpotent: [e,f] = h is central
  CHECK(center(sl2(2)).dim() == 1);

  const LieAlgebra W = witt1(5);
  const PrimeField& F = W.field();
  const auto I = ideal_spin(W, F.unit(5, 4));
  CHECK(I.dim() == 5);
  const auto nonneg = SubspaceBasis::span(F, 5, {F.unit(5, 1), F.unit(5, 2), F.unit(5, 3), F.unit(5, 4)});
  CHECK(is_subalgebra(W, nonneg));
  CHECK_FALSE(is_ideal(W, nonneg));
  CHECK(generated_subalgebra(W, {F.unit(5, 0), F.unit(5, 4)}).dim() == 5);
  CHECK_THROWS_AS(ideal_spin(W, Vec(5, 0)), InputError);
}

TEST_CASE("subalgebra and quotient structure constants") {
  const LieAlgebra H = heisenberg(7);
  const PrimeField& F = H.field();
  const SubspaceBasis Z = center(H);
  const LieAlgebra Q = quotient(H, Z);
  CHECK(Q.dim() == 2);
  CHECK(Q.brackets().empty());
  const LieAlgebra W = witt1(7);
  std::vector<Vec> pos;
  for (std::size_t i = 1; i < 7; ++i) pos.push_back(F.unit(7, i));
  const LieAlgebra W0 = subalgebra(W, SubspaceBasis::span(F, 7, pos));
  CHECK(W0.dim() == 6);
  CHECK(verify_lie(W0).ok);
  CHECK(W0.labels().front() == "e0");
  CHECK_THROWS_AS(quotient(W, SubspaceBasis::span(F, 7, pos)), PreconditionError);
}

TEST_CASE("simplicity verdicts") {
  CHECK(is_simple(sl2(5)).verdict == Simplicity::simple);
  CHECK(is_simple(sl2(3)).verdict == Simplicity::simple);
  CHECK(is_simple(witt1(5)).verdict == Simplicity::simple);
  CHECK(is_simple(witt1(7)).verdict == Simplicity::simple);
  CHECK(is_simple(heisenberg(5)).verdict == Simplicity::not_simple);
  CHECK(is_simple(sl2(2)).verdict == Simplicity::not_simple);
  // W(1;1) for p = 3 is isomorphic to sl2
  CHECK(is_simple(witt1(3)).verdict == Simplicity::simple);

  const LieAlgebra D = twisted_double(sl2(5));
  REQUIRE(verify_lie(D).ok);
  const auto r = is_simple(D);
  CHECK(r.verdict == Simplicity::not_simple);
}

TEST_CASE("Killing form radical") {
  CHECK(killing_radical(sl2(5)).radical.dim() == 0);
  CHECK(killing_radical(heisenberg(5)).radical.dim() == 3);
  // W(1;1), p = 5: the Killing form is degenerate
  CHECK(killing_radical(witt1(5)).radical.dim() > 0);
}

TEST_CASE("torus gradings") {
  const LieAlgebra L = sl2(7);
  const PrimeField& F = L.field();
  const auto tg = torus_grading(L, {F.unit(3, 1)});
  CHECK_FALSE(tg.rebased);
  CHECK(tg.grading.weights == std::vector<Weight>{{2}, {0}, {5}});
  CHECK_FALSE(grading_violation(L, tg.grading).has_value());

  // rotated torus: h + e is not diagonal in the standard basis
  const auto rot = torus_grading(L, {Vec{1, 1, 0}});
  CHECK(rot.rebased);
  CHECK(verify_lie(rot.algebra).ok);
  CHECK_FALSE(grading_violation(rot.algebra, rot.grading).has_value());

  // e is nilpotent, not toral
  CHECK_THROWS_AS(torus_grading(L, {F.unit(3, 0)}), PreconditionError);

  Grading wrong{{{1}, {0}, {1}}, 0};
  CHECK(grading_violation(L, wrong).has_value());
  LieAlgebra copy = L;
  CHECK_THROWS_AS(copy.set_grading(wrong), InputError);
}

TEST_CASE("generating sets generate") {
  for (const auto& L : {sl2(5), witt1(7), heisenberg(3)}) {
    const auto S = generating_set(L);
    std::vector<Vec> g;
    for (auto s : S) g.push_back(L.field().unit(L.dim(), s));
    CHECK(generated_subalgebra(L, g).dim() == L.dim());
  }
  CHECK(generating_set(witt1(7)).size() == 2);
}
