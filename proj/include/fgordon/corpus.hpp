#pragma once

#include <string>
#include <vector>

#include "fgordon/io.hpp"

namespace fgordon {

/// Bundled golden corpus: systems and algebras with recorded expectations
/// (dimensions, ranks, verdicts, verified Lagrangians).
const Json& builtin_corpus();

struct CorpusCaseResult {
  std::string name;
  bool pass = true;
  std::vector<std::string> failures;
};

struct CorpusRunResult {
  std::vector<CorpusCaseResult> cases;
  int failed = 0;
};

/// Runs every corpus case against its expectations; deterministic for a
/// fixed seed.
CorpusRunResult run_corpus(const Json& corpus, std::uint64_t seed);

/// Human-readable pass/fail table.
std::string corpus_table(const CorpusRunResult& r);

}  // namespace fgordon
