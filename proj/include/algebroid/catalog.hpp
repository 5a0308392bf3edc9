#pragma once

// Built-in algebroids and the JSON definition format
//   {name, n, m, rho: [[string]], C: [{gamma, alpha, beta, expr}],
//    charts: [{zmap, M, W?, zinv?, singular?}], singular?: [{coord, value}], generic_rank?}
// Indices in C, and coord in singular loci, are 1-based in JSON.

#include <string>
#include <vector>

#include "algebroid/algebroid.hpp"

namespace algebroid {

struct CatalogEntry {
  AlgebroidSpec spec;
  std::string lagrangian_E;   // default Lagrangian on E, variables z, zb, u, ub
  std::string lagrangian_TM;  // default Lagrangian on T'M, eta written as u
  int induction_case = 0;     // 1, 2 or 3 by the generic rank of rho
};

const std::vector<CatalogEntry>& catalog();

/// ConfigError for unknown names.
const CatalogEntry& catalog_entry(const std::string& name);

std::vector<std::string> catalog_names();

AlgebroidSpec parse_algebroid_json(const std::string& text);

/// Entry for a parsed definition with the generic default Lagrangians.
CatalogEntry entry_for(const AlgebroidSpec& spec);

/// 1 if m = n = rank, 2 if rank = m < n, 3 if rank = n < m, 0 otherwise.
int induction_case_of(const AlgebroidSpec& spec);

/// (1 + sum |z|^2) sum |u|^2 with k fiber coordinates.
std::string default_lagrangian(int n, int k);

}  // namespace algebroid
