#pragma once

#include <ostream>
#include <string>

#include "freeprod/instance_gen.hpp"
#include "freeprod/pullback.hpp"

namespace freeprod {

struct SweepOptions {
  std::size_t count = 100;
  std::uint64_t seed = 1;
  InstanceSpec spec;  // seed field is overridden per instance
  bool verbose = false;
};

struct SweepResult {
  std::size_t ran = 0;
  std::size_t skipped = 0;     // instances abandoned by rejection sampling
  std::size_t violations = 0;  // any nonzero count refutes the build
};

// Random sweep of the rank inequality: every instance must satisfy
// total intersection rank <= rank1 * rank2. Output order is by instance
// index; one line per instance when verbose, a summary line always.
inline SweepResult run_sweep(const SweepOptions& opts, std::ostream& out) {
  SweepResult res;
  for (std::size_t i = 0; i < opts.count; ++i) {
    InstanceSpec spec = opts.spec;
    spec.seed = opts.seed + i;  // independent stream per index
    Instance inst;
    try {
      inst = generate(spec);
    } catch (const RetriesExhausted&) {
      ++res.skipped;
      if (opts.verbose)
        out << "instance " << i << ": skipped (rejection limit)\n";
      continue;
    }
    ++res.ran;
    TheoremReport rep = verify_theorem1(inst.g1, inst.g2);
    bool symmetric_ok = true;
    {
      TheoremReport swapped = verify_theorem1(inst.g2, inst.g1);
      symmetric_ok = swapped.total_rank == rep.total_rank &&
                     swapped.component_count == rep.component_count;
    }
    if (!rep.holds || !symmetric_ok) ++res.violations;
    if (opts.verbose || !rep.holds || !symmetric_ok) {
      out << "instance " << i << ": r1=" << rep.rank1 << " r2=" << rep.rank2
          << " total=" << rep.total_rank
          << " components=" << rep.component_count << " "
          << (rep.holds ? "ok" : "VIOLATION")
          << (symmetric_ok ? "" : " ASYMMETRIC") << "\n";
    }
  }
  out << "sweep: " << res.ran << " instances, " << res.skipped
      << " skipped, " << res.violations << " violations\n";
  return res;
}

}  // namespace freeprod
