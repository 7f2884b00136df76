// One pass/fail line per acceptance criterion.
//
//   acceptance [--tier3] [--expect-fail N]...
//
// Exit status is nonzero when a criterion fails that was not listed with
// --expect-fail, or when a listed one passes.

#include <chrono>
#include <cstring>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>

#include "rlie/cartan.hpp"
#include "rlie/catalog.hpp"
#include "rlie/classical.hpp"
#include "rlie/cohomology.hpp"
#include "rlie/errors.hpp"
#include "rlie/groupscheme.hpp"
#include "rlie/restricted.hpp"

using namespace rlie;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
  void check(bool ok, const std::string& what) {
    if (!detail.empty()) detail += "; ";
    detail += what + (ok ? "" : " [FAILED]");
    pass = pass && ok;
  }
};

std::string str(std::size_t v) { return std::to_string(v); }

RestrictedLieAlgebra classical(ClassicalFamily f, std::size_t n, std::uint32_t p) { return construct_classical({f, n, p}); }

std::map<std::string, CohomologyReport> reports;

const CohomologyReport& h2star(const std::string& key, const RestrictedLieAlgebra& R) {
  auto it = reports.find(key);
  if (it == reports.end()) it = reports.emplace(key, restricted_h2(R)).first;
  return it->second;
}

struct Named {
  std::string name;
  std::function<RestrictedLieAlgebra()> make;
};

std::vector<Named> tier12_algebras() {
  return {
      {"W(1;1) p=5", [] { return witt(1, {1}, 5).as_restricted(); }},
      {"W(1;1) p=7", [] { return witt(1, {1}, 7).as_restricted(); }},
      {"sl(2) p=5", [] { return classical(ClassicalFamily::sl, 2, 5); }},
      {"sl(2) p=7", [] { return classical(ClassicalFamily::sl, 2, 7); }},
      {"sl(3) p=5", [] { return classical(ClassicalFamily::sl, 3, 5); }},
      {"sl(3) p=7", [] { return classical(ClassicalFamily::sl, 3, 7); }},
      {"sp(4) p=5", [] { return classical(ClassicalFamily::sp, 4, 5); }},
      {"psl(5) p=5", [] { return classical(ClassicalFamily::psl, 5, 5); }},
      {"H(2;1) p=5", [] { return hamiltonian(2, {1, 1}, 5).as_restricted(); }},
      {"W(2;1) p=5", [] { return witt(2, {1, 1}, 5).as_restricted(); }},
      {"K(3;1) p=5", [] { return contact(3, {1, 1, 1}, 5).as_restricted(); }},
      {"M(1,1) p=5", [] { return melikian(1, 1, 5).as_restricted(); }},
  };
}

Outcome c1() {
  Outcome o;
  for (std::uint32_t p : {5u, 7u}) {
    const std::size_t h = h2star("W(1;1) p=" + str(p), witt(1, {1}, p).as_restricted()).h2_restricted;
    o.check(h == 1, "W(1;1) p=" + str(p) + ": h2* = " + str(h));
  }
  return o;
}

Outcome c2() {
  Outcome o;
  for (std::uint32_t p : {5u, 7u})
    for (std::size_t n : {2u, 3u}) {
      const std::string key = "sl(" + str(n) + ") p=" + str(p);
      const std::size_t h = h2star(key, classical(ClassicalFamily::sl, n, p)).h2_restricted;
      o.check(h == 0, key + ": h2* = " + str(h));
    }
  return o;
}

Outcome c3() {
  Outcome o;
  const std::size_t h = h2star("H(2;1) p=5", hamiltonian(2, {1, 1}, 5).as_restricted()).h2_restricted;
  o.check(h == 3, "H(2;1) p=5: h2* = " + str(h));
  return o;
}

Outcome c4() {
  Outcome o;
  auto rad = [](const LieAlgebra& L) { return killing_radical(L).radical.dim(); };
  const std::size_t w = rad(witt(1, {1}, 5).lie), h = rad(hamiltonian(2, {1, 1}, 5).lie),
                    m = rad(melikian(1, 1, 5).lie);
  const std::size_t s = rad(classical(ClassicalFamily::sl, 2, 5).lie), sp = rad(classical(ClassicalFamily::sp, 4, 5).lie);
  o.check(w > 0, "W(1;1) radical " + str(w));
  o.check(h > 0, "H(2;1) radical " + str(h));
  o.check(m > 0, "M(1,1) radical " + str(m));
  o.check(s == 0, "sl(2) radical " + str(s));
  o.check(sp == 0, "sp(4) radical " + str(sp));
  return o;
}

Outcome c5() {
  Outcome o;
  auto verdict = [](const LieAlgebra& L) {
    const SimplicityResult r = is_simple(L);
    return r.verdict;
  };
  o.check(verdict(witt(1, {1}, 5).lie) == Simplicity::simple, "W(1;1) simple");
  o.check(verdict(classical(ClassicalFamily::psl, 5, 5).lie) == Simplicity::simple, "psl(5) simple");
  o.check(verdict(hamiltonian(2, {1, 1}, 5).lie) == Simplicity::simple, "H(2;1)^(2) simple");
  o.check(verdict(classical(ClassicalFamily::sl, 5, 5).lie) == Simplicity::not_simple, "sl(5) not simple");
  return o;
}

Outcome c6() {
  Outcome o;
  const CartanAlgebra W12 = witt(1, {2}, 5);
  const BijectionReport b = simple_to_restricted(W12.lie);
  o.check(b.ok, "bijection checks");
  o.check(b.envelope_dim == 26, "envelope dim " + str(b.envelope_dim));
  o.check(b.derived_dim == 25, "derived algebra dim " + str(b.derived_dim));
  const Envelope env = minimal_p_envelope(W12.lie);
  o.check(is_restricted_simple(env.algebra).is_simple(), "envelope restricted-simple");
  const CartanEnvelope ce = cartan_p_envelope(W12);
  o.check(ce.agrees && ce.envelope.algebra.lie.dim() == 26, "adjoined-powers envelope dim " +
                                                                 str(ce.envelope.algebra.lie.dim()));
  return o;
}

Outcome c7() {
  Outcome o;
  const RestrictedLieAlgebra sl2 = classical(ClassicalFamily::sl, 2, 5);
  const HopfAlgebra U = restricted_enveloping(sl2);
  o.check(U.dim == 125, "dim u(sl(2)) = " + str(U.dim));
  o.check(verify_hopf(U).ok, "verify_hopf");
  const RestrictedLieAlgebra P = primitives(U);
  o.check(P.lie == sl2.lie && P.pmap == sl2.pmap, "primitives recover sl(2) and its p-map");
  const auto h = height(dual_hopf(U));
  o.check(h == 1u, "height of the dual " + (h ? std::to_string(*h) : std::string("not connected")));
  return o;
}

Outcome c8() {
  Outcome o;
  CartanOptions raw;
  raw.verify = false;
  const CartanAlgebra M = melikian(1, 1, 5, raw);
  o.check(M.lie.dim() == 125, "dim " + str(M.lie.dim()));
  o.check(verify_lie(M.lie).ok, "verify_lie");
  o.check(M.restricted() && verify_restricted(M.lie, M.pmap).ok, "verify_restricted");
  for (std::uint32_t p : {7u, 11u}) {
    bool rejected = false;
    try {
      melikian(1, 1, p);
    } catch (const InputError&) {
      rejected = true;
    }
    o.check(rejected, "p=" + str(p) + " rejected");
  }
  return o;
}

Outcome c9() {
  Outcome o;
  const CohomologyReport& w = h2star("W(2;1) p=5", witt(2, {1, 1}, 5).as_restricted());
  o.check(w.h2_restricted == 2, "W(2;1) blockwise h2* = " + str(w.h2_restricted) + " over " + str(w.blocks.size()) +
                                    " blocks");
  const RestrictedLieAlgebra W11 = witt(1, {1}, 5).as_restricted();
  CohomologyOptions flat;
  flat.use_grading = false;
  const CohomologyReport a = h2star("W(1;1) p=5", W11), b = restricted_h2(W11, flat);
  flat.method = CohomologyMethod::full;
  const CohomologyReport c = restricted_h2(W11, flat);
  o.check(a.h2_restricted == b.h2_restricted && a.h2 == b.h2 && a.h1 == b.h1 && b.h2_restricted == c.h2_restricted,
          "W(1;1) blocked " + str(a.h2_restricted) + " = unblocked " + str(b.h2_restricted) + " = unblocked full " +
              str(c.h2_restricted));
  return o;
}

Outcome c10() {
  Outcome o;
  const CartanAlgebra K = contact(3, {1, 1, 1}, 5);
  o.check(K.lie.dim() == 125, "dim " + str(K.lie.dim()));
  o.check(is_simple(K.lie).is_simple(), "simple");
  o.check(K.restricted() && verify_restricted(K.lie, K.pmap).ok, "restricted");
  const std::size_t h1 = cohomology_dim(K.lie, 1, K.lie.grading());
  o.check(true, "ordinary h1 = " + str(h1));
  return o;
}

Outcome c11() {
  Outcome o;
  const std::size_t s = h2star("S(3;1) p=5", special(3, {1, 1, 1}, 5).as_restricted()).h2_restricted;
  const std::size_t k = h2star("K(3;1) p=5", contact(3, {1, 1, 1}, 5).as_restricted()).h2_restricted;
  const std::size_t m = h2star("M(1,1) p=5", melikian(1, 1, 5).as_restricted()).h2_restricted;
  o.check(s == 3, "S(3;1) h2* = " + str(s) + " (expected 3)");
  o.check(k == 3, "K(3;1) h2* = " + str(k));
  o.check(m == 5, "M(1,1) h2* = " + str(m));
  return o;
}

LieAlgebra gl(std::size_t n, std::uint32_t p) {
  PrimeField F(p);
  BracketTable t;
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) labels.push_back("E" + str(i) + str(j));
  for (std::size_t a = 0; a < n * n; ++a)
    for (std::size_t b = a + 1; b < n * n; ++b) {
      const std::size_t i = a / n, j = a % n, k = b / n, l = b % n;
      std::vector<Term> terms;
      if (j == k) terms.push_back({static_cast<std::uint32_t>(i * n + l), 1});
      if (l == i) terms.push_back({static_cast<std::uint32_t>(k * n + j), p - 1});
      if (auto s = F.normalize(terms); !s.empty()) t[{a, b}] = s;
    }
  return LieAlgebra(F, labels, t);
}

Vec matrix_pth_power(const PrimeField& F, const Vec& x, std::size_t n) {
  DenseMatrix M(n, n);
  for (std::size_t i = 0; i < n * n; ++i) M(i / n, i % n) = x[i];
  const DenseMatrix P = M.power(F, F.p());
  return Vec(P.data().begin(), P.data().end());
}

Outcome c12(bool tier3) {
  Outcome o;
  // d2 d1 = 0
  bool dd = true;
  for (const LieAlgebra& L : {witt(1, {1}, 5).lie, classical(ClassicalFamily::sl, 3, 5).lie, hamiltonian(2, {1, 1}, 5).lie})
    dd = dd && ce_differential(L, 2).multiply(L.field(), ce_differential(L, 1)).is_zero();
  o.check(dd, "d2 d1 = 0 on W(1;1), sl(3), H(2;1)");

  std::size_t gens = 0, algebras = 0;
  bool reverify = true, ineq = true;
  std::string bad;
  for (const Named& a : tier12_algebras()) {
    if (!tier3 && a.name.rfind("M(1,1)", 0) == 0 && !reports.count(a.name)) continue;
    const RestrictedLieAlgebra R = a.make();
    const CohomologyReport& r = h2star(a.name, R);
    ++algebras;
    const bool in = r.h2_restricted <= r.h2 && r.h2 <= r.h2_restricted + R.lie.dim() * r.h1;
    if (!in) bad += " " + a.name;
    ineq = ineq && in;
    for (const RestrictedDeformation& g : r.generators) {
      ++gens;
      reverify = reverify && verify_deformation(R, g).ok;
    }
    reverify = reverify && consistency_check(R, r).ok;
  }
  o.check(reverify, str(gens) + " generators re-verify over dual numbers");
  o.check(ineq, "h2* <= h2 <= h2* + dim h1 on " + str(algebras) + " algebras" + bad);

  std::mt19937 rng(2024);
  bool jac = true;
  std::size_t samples = 0;
  for (std::uint32_t p : {5u, 7u, 11u}) {
    const LieAlgebra L = gl(3, p);
    const PrimeField& F = L.field();
    std::uniform_int_distribution<Coeff> d(0, p - 1);
    for (int t = 0; t < 100; ++t, ++samples) {
      Vec x(9), y(9);
      for (auto& v : x) v = d(rng);
      for (auto& v : y) v = d(rng);
      Vec expect = F.sub(F.sub(matrix_pth_power(F, F.add(x, y), 3), matrix_pth_power(F, x, 3)), matrix_pth_power(F, y, 3));
      jac = jac && jacobson_terms(L, x, y) == expect;
    }
  }
  o.check(jac, "Jacobson sum equals matrix powers on " + str(samples) + " gl(3) samples");
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  bool tier3 = false;
  std::set<int> expect_fail;
  for (int i = 1; i < argc; ++i) {
    if (!std::strcmp(argv[i], "--tier3")) {
      tier3 = true;
    } else if (!std::strcmp(argv[i], "--expect-fail") && i + 1 < argc) {
      expect_fail.insert(std::atoi(argv[++i]));
    } else {
      std::cerr << "usage: acceptance [--tier3] [--expect-fail N]...\n";
      return 2;
    }
  }
  struct Criterion {
    int id;
    const char* title;
    std::function<Outcome()> run;
    bool gated = false;
  };
  const std::vector<Criterion> all{
      {1, "restricted h2 of W(1;1) is 1 at p = 5, 7", c1},
      {2, "sl(2) and sl(3) are rigid at p = 5, 7", c2},
      {3, "restricted h2 of H(2;1) is 3 at p = 5", c3},
      {4, "Killing radicals of Cartan type versus classical", c4},
      {5, "simplicity verdicts", c5},
      {6, "W(1;2) minimal p-envelope round trip", c6},
      {7, "u(sl(2)) Hopf layer", c7},
      {8, "Melikian M(1,1) construction", c8},
      {9, "W(2;1) blockwise and blocked versus unblocked", c9},
      {10, "K(3;1) construction and h1", c10},
      {11, "S(3;1), K(3;1), M(1,1) restricted h2", c11, true},
      {12, "property checks", [&] { return c12(tier3); }},
  };
  int bad = 0, passed = 0, failed = 0, skipped = 0;
  for (const Criterion& c : all) {
    if (c.gated && !tier3) {
      std::cout << "criterion " << c.id << ": SKIP  " << c.title << " (tier 3, run with --tier3)\n" << std::flush;
      ++skipped;
      continue;
    }
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool expected = expect_fail.count(c.id) > 0;
    std::ostringstream t;
    t.precision(1);
    t << std::fixed << secs;
    std::cout << "criterion " << c.id << ": " << (o.pass ? "PASS" : "FAIL") << "  " << c.title << " | " << o.detail
              << " | " << t.str() << " s";
    if (expected) std::cout << (o.pass ? " | unexpected pass" : " | expected failure, recorded");
    std::cout << "\n" << std::flush;
    (o.pass ? passed : failed)++;
    if (o.pass == expected) ++bad;
  }
  std::cout << "summary: " << passed << " passed, " << failed << " failed, " << skipped << " skipped\n";
  return bad ? 1 : 0;
}
