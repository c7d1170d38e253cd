#pragma once

#include <map>
#include <string>
#include <vector>

#include "ast.hpp"
#include "typecheck.hpp"

namespace sph::dsl {

/// Measurable outcome of a transformation run: how often each rewrite
/// rule fired and how many temporaries the program needs before/after.
struct TransformReport {
  std::map<std::string, int> rule_counts;  // R2..R8, SHIFT_INC
  int temps_before = 0;       // implicit expensive intermediates in the input
  int temps_after = 0;        // declared working variables plus remaining implicit ones
  int assignments_rewritten = 0;
  std::vector<std::string> warnings;

  void count(const char* rule) { ++rule_counts[rule]; }
  std::string to_json() const;
};

struct TransformResult {
  Program program;
  TransformReport report;
};

/// Pass 2: rewrites algebraic assignments into self-mutating form with
/// temporary minimization, incrementalizing recognized stencil
/// accumulation sequences.
TransformResult transform_program(const Program& p);

/// Generates pure wrapper procedures (copy, mutate, return) for every
/// operator in the table that has a self-mutating form.
Program generate_wrappers(const SignatureTable& sigs);

/// Merges adjacent sibling scopes that each declare one same-typed
/// temporary into a single scope reusing the first temporary.
StmtPtr merge_temporaries(const Stmt& block);

}  // namespace sph::dsl
