#pragma once

// Exact arithmetic over the prime field F_p and the linear algebra built on
// it: dense and sparse matrices, canonical reduced row-echelon subspaces,
// rank and kernel computations.

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "rlie/errors.hpp"

namespace rlie {

using Coeff = std::uint32_t;
using Vec = std::vector<Coeff>;

struct Term {
  std::uint32_t index;
  Coeff coeff;
  friend bool operator==(const Term&, const Term&) = default;
};

/// Sorted by index, no zero coefficients.
using SparseVec = std::vector<Term>;

bool is_prime(std::uint64_t n);

/// The field Z/pZ. Elements are plain integers in [0, p).
class PrimeField {
 public:
  /// Rejects non-primes and p >= 2^15 (products must fit in 32 bits with
  /// room for lazy accumulation).
  explicit PrimeField(std::uint32_t p);

  std::uint32_t p() const { return p_; }

  Coeff add(Coeff a, Coeff b) const {
    Coeff s = a + b;
    return s >= p_ ? s - p_ : s;
  }
  Coeff sub(Coeff a, Coeff b) const { return a >= b ? a - b : a + p_ - b; }
  Coeff neg(Coeff a) const { return a == 0 ? 0 : p_ - a; }
  Coeff mul(Coeff a, Coeff b) const { return (a * b) % p_; }
  Coeff inv(Coeff a) const;
  Coeff div(Coeff a, Coeff b) const { return mul(a, inv(b)); }
  Coeff pow(Coeff a, std::uint64_t e) const;
  Coeff from_int(std::int64_t v) const;
  /// Signed representative in (-p/2, p/2].
  std::int64_t to_signed(Coeff a) const;

  Vec zero(std::size_t n) const { return Vec(n, 0); }
  Vec unit(std::size_t n, std::size_t i) const;
  /// y += a * x
  void axpy(Vec& y, Coeff a, std::span<const Coeff> x) const;
  void axpy(Vec& y, Coeff a, const SparseVec& x) const;
  void scale(Vec& v, Coeff a) const;
  Vec add(const Vec& a, const Vec& b) const;
  Vec sub(const Vec& a, const Vec& b) const;
  Coeff dot(std::span<const Coeff> a, std::span<const Coeff> b) const;

  SparseVec to_sparse(std::span<const Coeff> v) const;
  Vec to_dense(const SparseVec& v, std::size_t n) const;
  /// Merges duplicate indices and drops zeros.
  SparseVec normalize(std::vector<Term> terms) const;

  friend bool operator==(const PrimeField& a, const PrimeField& b) { return a.p_ == b.p_; }

 private:
  std::uint32_t p_;
  std::vector<Coeff> inverse_;
};

bool is_zero(std::span<const Coeff> v);

/// An element of F_p carrying its modulus; used at API boundaries and in
/// tests. Arithmetic between scalars of different characteristic throws.
class FpScalar {
 public:
  FpScalar(std::int64_t value, std::uint32_t p);
  std::uint32_t value() const { return value_; }
  std::uint32_t p() const { return p_; }

  FpScalar operator+(const FpScalar& o) const;
  FpScalar operator-(const FpScalar& o) const;
  FpScalar operator*(const FpScalar& o) const;
  FpScalar operator/(const FpScalar& o) const;
  FpScalar operator-() const;
  FpScalar inverse() const;
  friend bool operator==(const FpScalar&, const FpScalar&) = default;

 private:
  FpScalar(std::uint32_t value, std::uint32_t p, bool) : value_(value), p_(p) {}
  void same_field(const FpScalar& o) const;
  std::uint32_t value_;
  std::uint32_t p_;
};

/// C(a, b) mod p by Lucas' theorem (digit-wise in base p).
FpScalar lucas_binomial(std::uint64_t a, std::uint64_t b, std::uint32_t p);
/// Same as lucas_binomial without the primality check on every call.
Coeff binomial_mod(std::uint64_t a, std::uint64_t b, std::uint32_t p);

/// Row-major dense matrix over F_p.
class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, 0) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  Coeff& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  Coeff operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
  std::span<Coeff> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const Coeff> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }
  const std::vector<Coeff>& data() const { return data_; }

  static DenseMatrix identity(std::size_t n);
  DenseMatrix transpose() const;
  DenseMatrix multiply(const PrimeField& F, const DenseMatrix& o) const;
  Vec apply(const PrimeField& F, std::span<const Coeff> v) const;
  DenseMatrix add(const PrimeField& F, const DenseMatrix& o) const;
  DenseMatrix sub(const PrimeField& F, const DenseMatrix& o) const;
  DenseMatrix power(const PrimeField& F, std::uint64_t e) const;
  bool is_zero() const;
  friend bool operator==(const DenseMatrix&, const DenseMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Coeff> data_;
};

/// Immutable sparse matrix stored by rows; no stored zeros.
class SparseMatrix {
 public:
  SparseMatrix() = default;
  /// Entries may repeat; they are summed. Throws DimensionError on
  /// out-of-range indices.
  SparseMatrix(const PrimeField& F, std::size_t rows, std::size_t cols,
               std::vector<std::pair<std::pair<std::size_t, std::size_t>, Coeff>> entries);
  SparseMatrix(std::size_t cols, std::vector<SparseVec> rows);
  static SparseMatrix from_dense(const PrimeField& F, const DenseMatrix& M);

  std::size_t rows() const { return rows_.size(); }
  std::size_t cols() const { return cols_; }
  std::size_t nonzeros() const;
  const SparseVec& row(std::size_t r) const { return rows_[r]; }
  Coeff at(std::size_t r, std::size_t c) const;

  SparseMatrix transpose() const;
  SparseMatrix multiply(const PrimeField& F, const SparseMatrix& o) const;
  DenseMatrix to_dense() const;
  bool is_zero() const { return nonzeros() == 0; }
  /// Rows permuted so that new row i is old row perm[i].
  SparseMatrix permute_rows(std::span<const std::size_t> perm) const;

 private:
  std::size_t cols_ = 0;
  std::vector<SparseVec> rows_;
};

/// A subspace of F_p^n in canonical reduced row-echelon form: rows sorted by
/// strictly increasing pivot, pivot entries 1, zeros above and below pivots.
class SubspaceBasis {
 public:
  SubspaceBasis() = default;
  explicit SubspaceBasis(std::size_t ambient) : ambient_(ambient) {}
  /// Canonical basis of the span of arbitrary vectors.
  static SubspaceBasis span(const PrimeField& F, std::size_t ambient, const std::vector<Vec>& vectors);
  static SubspaceBasis whole(const PrimeField& F, std::size_t ambient);

  std::size_t ambient() const { return ambient_; }
  std::size_t dim() const { return rows_.size(); }
  const std::vector<Vec>& vectors() const { return rows_; }
  const std::vector<std::size_t>& pivots() const { return pivots_; }

  /// v minus its projection along the pivot coordinates.
  Vec reduce(const PrimeField& F, Vec v) const;
  bool contains(const PrimeField& F, const Vec& v) const;
  bool contains(const PrimeField& F, const SubspaceBasis& other) const;
  /// Coordinates of v in this basis; v must lie in the subspace.
  Vec coordinates(const PrimeField& F, const Vec& v) const;

  friend bool operator==(const SubspaceBasis&, const SubspaceBasis&) = default;

 private:
  friend class Echelon;
  std::size_t ambient_ = 0;
  std::vector<Vec> rows_;
  std::vector<std::size_t> pivots_;
};

struct SubspaceOps {
  SubspaceBasis sum;
  SubspaceBasis intersection;
};

SubspaceBasis subspace_sum(const PrimeField& F, const SubspaceBasis& A, const SubspaceBasis& B);
SubspaceBasis subspace_intersection(const PrimeField& F, const SubspaceBasis& A, const SubspaceBasis& B);
/// Sum and intersection together; throws DimensionError on ambient mismatch.
SubspaceOps subspace_ops(const PrimeField& F, const SubspaceBasis& A, const SubspaceBasis& B);

/// Incremental Gaussian elimination keeping the inserted rows in fully
/// reduced echelon form. Reduction accumulates lazily in 32-bit lanes and
/// only reduces modulo p at pivot reads, so the inner loop vectorizes.
class Echelon {
 public:
  Echelon(const PrimeField& F, std::size_t width);

  std::size_t width() const { return width_; }
  std::size_t rank() const { return rows_.size(); }
  /// Pivot columns in insertion order.
  const std::vector<std::size_t>& pivots() const { return pivots_; }
  /// Returns true when v was independent of the rows inserted so far.
  bool insert(Vec v);
  bool insert(const SparseVec& v);
  void reduce(Vec& v) const;
  bool contains(Vec v) const;
  /// Canonical RREF of the row space.
  SubspaceBasis basis() const;
  /// Canonical RREF of {x : r.x = 0 for every inserted row r}.
  SubspaceBasis kernel() const;

 private:
  void reduce_lazy(Vec& v) const;
  PrimeField F_;
  std::size_t width_;
  std::vector<Vec> rows_;
  std::vector<std::size_t> pivots_;
  std::vector<std::int64_t> row_of_col_;
};

/// Rank and row space of many dense rows over F_p. Rows are buffered and
/// reduced in batches against the fully reduced echelon form with
/// floating-point matrix products, which are exact while every accumulated
/// sum stays below 2^53.
class BatchedEchelon {
 public:
  BatchedEchelon(const PrimeField& F, std::size_t width, std::size_t batch = 512);
  ~BatchedEchelon();
  BatchedEchelon(BatchedEchelon&&) noexcept;
  BatchedEchelon& operator=(BatchedEchelon&&) noexcept;

  std::size_t width() const { return width_; }
  /// Buffers a row; values must be reduced mod p.
  void add(std::span<const Coeff> row);
  void add(const SparseVec& row);
  void flush();
  std::size_t rank();
  bool full() { return rank() == width_; }
  SubspaceBasis basis();
  /// Canonical RREF of {x : r.x = 0 for every added row r}.
  SubspaceBasis kernel();

 private:
  struct Impl;
  PrimeField F_;
  std::size_t width_;
  std::size_t batch_;
  std::unique_ptr<Impl> impl_;
};

struct EliminationOptions {
  /// A pivot row denser than this fraction of the width triggers the switch
  /// to dense elimination of the remaining rows.
  double density_threshold = 0.15;
  /// Dense elimination is only used when the width is at most this.
  std::size_t dense_width_limit = 12000;
};

/// Rank by sparse elimination with a Markowitz-style pivot choice (short
/// rows first, least-populated pivot column), switching to dense elimination
/// once fill-in exceeds the density threshold.
std::size_t rank(const PrimeField& F, const SparseMatrix& M, const EliminationOptions& opts = {});
std::size_t rank(const PrimeField& F, const DenseMatrix& M);
/// Canonical RREF basis of {v : M v = 0}.
SubspaceBasis nullspace(const PrimeField& F, const SparseMatrix& M);
SubspaceBasis nullspace(const PrimeField& F, const DenseMatrix& M);
/// Inverse of a square matrix; nullopt when singular.
std::optional<DenseMatrix> inverse(const PrimeField& F, const DenseMatrix& M);
/// Some solution of M x = b, or nullopt-like empty vector flag via bool.
bool solve(const PrimeField& F, const DenseMatrix& M, const Vec& b, Vec& x);

}  // namespace rlie
