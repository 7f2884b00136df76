#pragma once

#include <optional>
#include <string>
#include <vector>

#include "rlie/io.hpp"

namespace rlie {

/// Family names: witt/W, special/S, hamiltonian/H, contact/K, melikian/M,
/// sl, psl, so, sp. For H and K `m` is the number of variables (2r, 2r+1).
struct BuildSpec {
  std::string family;
  std::size_t m = 1;
  std::vector<std::uint32_t> n;  // empty: all ones
  std::uint32_t p = 5;
  std::size_t size = 2;  // classical matrix size
};

/// p-map attached when the algebra is restricted. Throws InputError for
/// unknown families.
LoadedAlgebra build_algebra(const BuildSpec& spec);
std::string display_name(const BuildSpec& spec);

struct CatalogEntry {
  BuildSpec spec;
  int tier = 1;
  std::optional<std::size_t> dim;
  std::optional<bool> simple;
  std::optional<bool> killing_degenerate;
  std::optional<std::size_t> h2_restricted;
  /// Ordinary h1, reported without an expectation.
  bool compute_h1 = false;
};

struct Comparison {
  std::string quantity;
  std::string expected;
  std::string computed;
  /// "formula" for dimensions, "published" for stated values.
  std::string source;
  bool match = false;
};

struct CatalogResult {
  std::string name;
  std::string params;
  int tier = 1;
  std::vector<Comparison> comparisons;
  double seconds = 0;
};

/// Entries with tier <= max_tier, in a fixed order.
std::vector<CatalogEntry> reference_catalog(int max_tier);
CatalogResult run_catalog_entry(const CatalogEntry& e, std::uint64_t seed = 0x5eed);
/// JSON with a "mismatches" count; timing fields are the only
/// nondeterministic values.
std::string catalog_json(const std::vector<CatalogResult>& results, bool timings = true);
std::string catalog_table(const std::vector<CatalogResult>& results);
std::size_t catalog_mismatches(const std::vector<CatalogResult>& results);

}  // namespace rlie
