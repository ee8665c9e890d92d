#pragma once

#include <functional>
#include <optional>
#include <string>

#include "delaycert/nonlinearity.hpp"
#include "delaycert/quad_form.hpp"
#include "delaycert/spectrum.hpp"
#include "delaycert/system.hpp"
#include "delaycert/types.hpp"

namespace delaycert {

enum class Verdict { Certified, Rejected, Inconclusive };
enum class CertificateKind { Stability, InertialManifold };
// Sector condition (pointwise bounds, F(0) = 0) or monotone sector
// condition (incremental bounds).
enum class Mode { SC, MSC };

const char* to_string(Verdict v);
const char* to_string(CertificateKind k);
const char* to_string(Mode m);

// Certified requires a margin strictly above this; margins in (0, kStrictMargin]
// are Inconclusive.
inline constexpr double kStrictMargin = 1e-9;

struct SweepOptions {
  int nodes = 2048;
  double refine_tol = 1e-9;
  int max_depth = 60;
  int max_peaks = 16;
  double max_omega = 1e9;
  int threads = 1;
};

struct SweepInfo {
  double omega_cap = 0.0;
  int nodes = 0;
  int depth = 0;
};

struct FrequencyResult {
  double sup = 0.0;          // sup over [0, omega_cap] of the swept objective
  double worst_omega = 0.0;  // maximiser
  double tail_bound = 0.0;   // upper bound of the objective beyond omega_cap
  SweepInfo sweep;
};

struct Certificate {
  Verdict verdict = Verdict::Inconclusive;
  CertificateKind kind = CertificateKind::Stability;
  std::string check;  // "smith", "circle" or "quadform"
  double nu = 0.0;
  std::optional<int> j;
  double margin = 0.0;     // positive iff the frequency inequality holds
  double sup_value = 0.0;  // swept supremum (|W| for smith, lambda_max otherwise)
  double worst_omega = 0.0;
  double tail_bound = 0.0;
  SweepInfo sweep;
  std::string note;
};

// H = W^* Gs W - (Gsx W + (Gsx W)^*) + Gx, so that xi^* H xi = G(-W xi, xi).
ComplexMatrix hermitian_form_at(const QuadForm& form, const ComplexMatrix& w);

// Largest eigenvalue of a Hermitian matrix.
double lambda_max(const ComplexMatrix& h);

// Bound on |W(-nu + i omega)|_2 valid for all |omega| > omega. Throws
// OmegaTooSmall below the admissible range.
double transfer_tail_norm(const DelaySystem& sys, double nu, double omega);

// Upper bound on sup_{|omega| > omega} lambda_max(H(omega)).
double tail_cap(const DelaySystem& sys, const QuadForm& form, double nu, double omega);

// Smallest omega for which tail bounds are defined.
double minimal_tail_omega(const DelaySystem& sys, double nu);

// Sup of `objective` over [0, omega_cap]: uniform grid, then trisection
// refinement around the largest local maxima.
FrequencyResult sweep_sup(const std::function<double(double)>& objective, double omega_cap,
                          const SweepOptions& options);

// Sweeps lambda_max(H(-nu + i omega)) after picking omega_cap so that the
// tail cap is negative.
FrequencyResult verify_frequency_condition(const DelaySystem& sys, const QuadForm& form, double nu,
                                           const SweepOptions& options = {});

// Sweep of -Re[(1 + k1 W)^* (1 + k2 W)] on Re p = -nu without the root
// count; `tail_bound` holds the tail cap of the sector form.
FrequencyResult circle_frequency(const DelaySystem& sys, double k1, double k2, double nu,
                                 const SweepOptions& options = {});

// sup |W(-nu + i omega)|_2 < 1 / lambda.
Certificate smith_check(const DelaySystem& sys, double lambda, double nu,
                        const SweepOptions& options = {});

// Re[(1 + k1 W)^* (1 + k2 W)] > 0 for scalar plants. Mode SC additionally
// requires k1 < 0 < k2.
Certificate circle_check(const DelaySystem& sys, double k1, double k2, double nu,
                         const SweepOptions& options = {}, Mode mode = Mode::MSC);

// Full hypothesis check: root count right of -nu plus the frequency
// inequality for the form derived from the nonlinearity's metadata.
Certificate certify(const DelaySystem& sys, const Nonlinearity& f, double nu, Mode mode,
                    const SweepOptions& options = {});

}  // namespace delaycert
