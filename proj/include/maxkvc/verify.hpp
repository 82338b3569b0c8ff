#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace maxkvc {

/// One named invariant check with its worst observed metric.
struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct VerifyReport {
  std::vector<CheckResult> checks;

  bool all_passed() const {
    for (const auto& c : checks)
      if (!c.passed) return false;
    return true;
  }
};

/// Complete-mixer eigenvalues equal twice the closed-form Johnson spectrum
/// (multiset, multiplicities exact) for all n <= n_max, all k in [0, n].
CheckResult check_johnson_spectrum(int n_max = 10, double tol = 1e-8);

/// e^{-i pi H_K} is the identity up to a global phase for all n <= n_max,
/// all k (max-norm after phase alignment below tol).
CheckResult check_complete_mixer_period(int n_max = 10, double tol = 1e-9);

/// The ring propagator has no period x = pi d / 2, d <= d_max, for
/// n in [4, 10]; for n = 2, 3 and for the complete mixer the probe finds
/// one.
CheckResult check_ring_aperiodicity(int d_max = 1000, double tol = 1e-6);

/// Subspace F_p matches the brute-force 2^n reference, and the reference's
/// weight-k sector occupation stays 1, on random cases with n <= 8,
/// p <= 3, both mixers, Dicke and basis starts.
CheckResult check_full_space_equivalence(int cases = 100,
                                         std::uint64_t seed = 1,
                                         unsigned threads = 1,
                                         double tol = 1e-10);

/// F_p(2 pi - gamma, pi - beta) = F_p (complete mixer) and
/// F_p(-gamma, -beta) = F_p (both mixers) on random cases with real
/// initial states.
CheckResult check_symmetries(int cases = 100, std::uint64_t seed = 2,
                             unsigned threads = 1, double tol = 1e-9);

/// Mean of F_p over all C(n,k) basis starts equals the mean objective
/// value, independent of the angles.
CheckResult check_mixed_state_constancy(int cases = 10,
                                        std::uint64_t seed = 3,
                                        double tol = 1e-9);

/// Zero-angle rounds appended or prepended leave F_p unchanged.
CheckResult check_zero_padding(int cases = 50, std::uint64_t seed = 4,
                               double tol = 1e-12);

/// Reference warm-start ladders produce non-decreasing best values in p.
CheckResult check_reference_monotonicity(std::uint64_t seed = 5,
                                         unsigned threads = 1);

/// All checks at their default scales.
VerifyReport run_verify_suite(std::uint64_t seed = 1, unsigned threads = 1);

}  // namespace maxkvc
