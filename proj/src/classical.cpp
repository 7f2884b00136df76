#include "rlie/classical.hpp"

namespace rlie {

ClassicalFamily parse_classical_family(const std::string& name) {
  if (name == "sl") return ClassicalFamily::sl;
  if (name == "psl") return ClassicalFamily::psl;
  if (name == "so") return ClassicalFamily::so;
  if (name == "sp") return ClassicalFamily::sp;
  throw InputError("unknown classical family '" + name + "' (expected sl, psl, so or sp)");
}

std::string to_string(ClassicalFamily f) {
  switch (f) {
    case ClassicalFamily::sl: return "sl";
    case ClassicalFamily::psl: return "psl";
    case ClassicalFamily::so: return "so";
    case ClassicalFamily::sp: return "sp";
  }
  return "?";
}

DenseMatrix classical_form(const PrimeField& F, ClassicalFamily family, std::size_t N) {
  DenseMatrix J(N, N);
  for (std::size_t i = 0; i < N; ++i) {
    const bool lower = 2 * i >= N;
    J(i, N - 1 - i) = family == ClassicalFamily::sp && lower ? F.neg(1) : 1;
  }
  return J;
}

namespace {

std::string entry_label(std::size_t r, std::size_t c) {
  if (r == c) return "h" + std::to_string(r + 1);
  return "e" + std::to_string(r + 1) + "_" + std::to_string(c + 1);
}

// weight of the matrix unit E_rc under the diagonal torus
Weight entry_weight(ClassicalFamily f, std::size_t N, std::size_t r, std::size_t c) {
  if (f == ClassicalFamily::sl || f == ClassicalFamily::psl) {
    Weight w(N, 0);
    w[r] += 1;
    w[c] -= 1;
    return w;
  }
  const std::size_t k = N / 2;
  Weight w(k, 0);
  auto add = [&](std::size_t i, int s) {
    if (i < k) w[i] += s;
    else if (N - 1 - i < k) w[N - 1 - i] -= s;
  };
  add(r, 1);
  add(c, -1);
  return w;
}

}  // namespace

RestrictedLieAlgebra construct_classical(const ClassicalSpec& spec) {
  const std::uint32_t p = spec.p;
  if (p == 2 || p == 3)
    throw InputError("classical algebras are built for p > 3 only; p = 2 and 3 carry exceptional behaviour");
  const PrimeField F(p);
  const std::size_t N = spec.size;
  switch (spec.family) {
    case ClassicalFamily::sl:
    case ClassicalFamily::psl:
      if (N < 2) throw InputError("sl(N) and psl(N) need N >= 2");
      break;
    case ClassicalFamily::so:
      if (N % 2 == 1 ? N < 5 : N < 8) throw InputError("so(N) needs N = 2n+1 with n >= 2 or N = 2n with n >= 4");
      break;
    case ClassicalFamily::sp:
      if (N % 2 == 1 || N < 4) throw InputError("sp(N) needs even N >= 4");
      break;
  }

  std::vector<SparseMatrix> gens;
  if (spec.family == ClassicalFamily::sl || spec.family == ClassicalFamily::psl) {
    for (std::size_t i = 0; i < N; ++i)
      for (std::size_t j = 0; j < N; ++j) {
        if (i == j && i + 1 == N) continue;
        std::vector<std::pair<std::pair<std::size_t, std::size_t>, Coeff>> e{{{i, j}, 1}};
        if (i == j) e.push_back({{N - 1, N - 1}, F.neg(1)});
        gens.emplace_back(F, N, N, std::move(e));
      }
  } else {
    // X^T J + J X = 0, unknown X_{ab} at index a*N + b
    const DenseMatrix J = classical_form(F, spec.family, N);
    std::vector<SparseVec> rows;
    for (std::size_t a = 0; a < N; ++a)
      for (std::size_t b = 0; b < N; ++b) {
        std::vector<Term> t;
        for (std::size_t k = 0; k < N; ++k) {
          if (J(k, b)) t.push_back({static_cast<std::uint32_t>(k * N + a), J(k, b)});
          if (J(a, k)) t.push_back({static_cast<std::uint32_t>(k * N + b), J(a, k)});
        }
        auto r = F.normalize(std::move(t));
        if (!r.empty()) rows.push_back(std::move(r));
      }
    const SubspaceBasis K = nullspace(F, SparseMatrix(N * N, std::move(rows)));
    for (const auto& v : K.vectors()) {
      std::vector<std::pair<std::pair<std::size_t, std::size_t>, Coeff>> e;
      for (std::size_t q = 0; q < v.size(); ++q)
        if (v[q]) e.push_back({{q / N, q % N}, v[q]});
      gens.emplace_back(F, N, N, std::move(e));
    }
  }
  MatrixClosureOptions opts;
  opts.assume_subalgebra = true;
  opts.label = entry_label;
  MatrixLieAlgebra M = matrix_lie_algebra(F, N, gens, opts);
  if (M.pmap.empty()) throw Error("classical algebra is not closed under p-th powers");

  Grading g;
  for (auto q : M.space.pivots()) g.weights.push_back(entry_weight(spec.family, N, q / N, q % N));
  M.lie.set_grading(g);
  M.lie.set_provenance("family", to_string(spec.family));
  M.lie.set_provenance("size", std::to_string(N));
  M.lie.set_provenance("p", std::to_string(p));
  M.lie.set_provenance("pmap", "p-th matrix power");
  if (spec.family == ClassicalFamily::so || spec.family == ClassicalFamily::sp)
    M.lie.set_provenance("form", "antidiagonal Gram matrix");

  if (spec.family != ClassicalFamily::psl) return RestrictedLieAlgebra{std::move(M.lie), std::move(M.pmap)};

  const SubspaceBasis Z = center(M.lie);
  LieAlgebra Q = quotient(M.lie, Z);
  std::vector<Vec> images;
  std::vector<Weight> weights;
  {
    std::size_t k = 0;
    for (std::size_t c = 0; c < M.lie.dim(); ++c) {
      if (k < Z.pivots().size() && Z.pivots()[k] == c) {
        ++k;
        continue;
      }
      images.push_back(quotient_coordinates(F, Z, M.pmap[c]));
      weights.push_back(g.weights[c]);
    }
  }
  Q.set_grading(Grading{weights, 0});
  for (const auto& [key, value] : M.lie.provenance()) Q.set_provenance(key, value);
  Q.set_provenance("quotient", "center of sl(" + std::to_string(N) + ")");
  return RestrictedLieAlgebra{std::move(Q), std::move(images)};
}

}  // namespace rlie
