#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "rlie/cohomology.hpp"
#include "rlie/groupscheme.hpp"
#include "rlie/restricted.hpp"

namespace rlie {

inline constexpr int kAlgebraFormatVersion = 1;

struct BracketTriple {
  std::size_t i = 0, j = 0;
  SparseVec value;
  friend bool operator==(const BracketTriple&, const BracketTriple&) = default;
};

/// On-disk algebra: brackets [e_i, e_j] for i < j sorted by (i, j), optional
/// p-map images and grading, free-form provenance.
struct AlgebraFile {
  int format_version = kAlgebraFormatVersion;
  std::uint32_t p = 0;
  std::size_t dim = 0;
  std::vector<std::string> basis_labels;
  std::vector<BracketTriple> brackets;
  std::optional<std::vector<SparseVec>> pmap;
  std::optional<Grading> grading;
  std::map<std::string, std::string> provenance;
  friend bool operator==(const AlgebraFile&, const AlgebraFile&) = default;
};

/// Canonical text: fixed key order, one bracket triple per line.
std::string serialize(const AlgebraFile& f);
/// Strict parse. Throws InputError naming the offending location on
/// unknown fields, version mismatch, out-of-range or zero coefficients and
/// unsorted triples.
AlgebraFile deserialize(const std::string& text);

AlgebraFile to_file(const LieAlgebra& L, const std::vector<Vec>* pmap = nullptr);
AlgebraFile to_file(const RestrictedLieAlgebra& R);

struct LoadedAlgebra {
  LieAlgebra lie;
  std::optional<std::vector<Vec>> pmap;
  RestrictedLieAlgebra restricted() const;
};
/// Builds the algebra (grading checked by set_grading).
LoadedAlgebra from_file(const AlgebraFile& f);

AlgebraFile read_algebra_file(const std::string& path);
void write_algebra_file(const std::string& path, const AlgebraFile& f);

/// JSON text of a cohomology report (without the generator tensors unless
/// asked).
std::string report_json(const CohomologyReport& r, bool generators = false, int indent = 2);

/// Dense tensors up to dimension 256, sparse beyond.
std::string hopf_to_json(const HopfAlgebra& H, int indent = -1);
HopfAlgebra hopf_from_json(const std::string& text);

}  // namespace rlie
