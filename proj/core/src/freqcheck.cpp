#include "delaycert/freqcheck.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <mutex>
#include <sstream>
#include <thread>
#include <vector>

#include "delaycert/error.hpp"
#include "delaycert/measure.hpp"
#include "delaycert/transfer.hpp"

namespace delaycert {

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Certified: return "Certified";
    case Verdict::Rejected: return "Rejected";
    case Verdict::Inconclusive: return "Inconclusive";
  }
  return "?";
}

const char* to_string(CertificateKind k) {
  return k == CertificateKind::Stability ? "Stability" : "InertialManifold";
}

const char* to_string(Mode m) { return m == Mode::SC ? "SC" : "MSC"; }

ComplexMatrix hermitian_form_at(const QuadForm& form, const ComplexMatrix& w) {
  if (w.rows() != form.r() || w.cols() != form.m())
    throw DimensionError("W must be r x m to match the quadratic form");
  const ComplexMatrix cross = form.g_cross().cast<Complex>() * w;
  ComplexMatrix h = w.adjoint() * form.g_sigma().cast<Complex>() * w - cross - cross.adjoint();
  h += form.g_xi().cast<Complex>();
  return 0.5 * (h + h.adjoint());
}

double lambda_max(const ComplexMatrix& h) {
  if (h.rows() != h.cols() || h.rows() == 0) throw DimensionError("lambda_max needs a square matrix");
  if (h.rows() == 1) return h(0, 0).real();
  const Eigen::SelfAdjointEigenSolver<ComplexMatrix> eig(h, Eigen::EigenvaluesOnly);
  return eig.eigenvalues().maxCoeff();
}

namespace {

double growth(const DelaySystem& sys, double nu) { return std::exp(std::max(0.0, nu) * sys.tau()); }

}  // namespace

double minimal_tail_omega(const DelaySystem& sys, double nu) {
  return growth(sys, nu) * total_variation(sys.a());
}

// For |omega| > omega_min and p = -nu + i omega: |p| >= |omega| and
// |alpha(p)|_2 <= growth * TV(a), so the Neumann series gives
// |(alpha(p) - pI)^{-1}|_2 <= 1 / (|omega| - growth * TV(a)).
double transfer_tail_norm(const DelaySystem& sys, double nu, double omega) {
  const double omega_min = minimal_tail_omega(sys, nu);
  if (!(omega > omega_min)) {
    std::ostringstream os;
    os << "frequency cap " << omega << " must exceed " << omega_min;
    throw OmegaTooSmall(os.str(), omega_min);
  }
  const double gamma_bound = growth(sys, nu) * total_variation(sys.c());
  return gamma_bound * spectral_norm(Matrix(sys.b())) / (omega - omega_min);
}

double tail_cap(const DelaySystem& sys, const QuadForm& form, double nu, double omega) {
  const double w = transfer_tail_norm(sys, nu, omega);
  const Eigen::SelfAdjointEigenSolver<Matrix> eig(form.g_xi(), Eigen::EigenvaluesOnly);
  return spectral_norm(form.g_sigma()) * w * w + 2.0 * spectral_norm(form.g_cross()) * w +
         eig.eigenvalues().maxCoeff();
}

namespace {

// Doubles omega from twice the admissible minimum until `cap(omega) < 0`.
template <class Cap>
std::pair<double, double> choose_omega(const DelaySystem& sys, double nu, double max_omega,
                                       Cap&& cap) {
  const double omega_min = minimal_tail_omega(sys, nu);
  double omega = omega_min > 0.0 ? 2.0 * omega_min : 1.0;
  for (; omega <= max_omega; omega *= 2.0) {
    const double c = cap(omega);
    if (c < 0.0) return {omega, c};
  }
  std::ostringstream os;
  os << "no frequency cap up to " << max_omega << " makes the tail bound negative";
  throw TailUnbounded(os.str());
}

}  // namespace

FrequencyResult sweep_sup(const std::function<double(double)>& objective, double omega_cap,
                          const SweepOptions& options) {
  const int n = std::max(options.nodes, 3);
  const double spacing = omega_cap / (n - 1);
  std::vector<double> values(n);

  const int threads = std::clamp(options.threads, 1, n);
  if (threads == 1) {
    for (int i = 0; i < n; ++i) values[i] = objective(spacing * i);
  } else {
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) {
      pool.emplace_back([&, t] {
        try {
          for (int i = t; i < n; i += threads) values[i] = objective(spacing * i);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      });
    }
    for (auto& th : pool) th.join();
    if (failure) std::rethrow_exception(failure);
  }

  FrequencyResult result;
  result.sweep.omega_cap = omega_cap;
  result.sweep.nodes = n;
  int best = static_cast<int>(std::max_element(values.begin(), values.end()) - values.begin());
  result.sup = values[best];
  result.worst_omega = spacing * best;

  std::vector<int> peaks;
  for (int i = 0; i < n; ++i) {
    const bool left = i == 0 || values[i] >= values[i - 1];
    const bool right = i == n - 1 || values[i] >= values[i + 1];
    if (left && right) peaks.push_back(i);
  }
  std::sort(peaks.begin(), peaks.end(), [&](int a, int b) { return values[a] > values[b]; });
  if (static_cast<int>(peaks.size()) > options.max_peaks) peaks.resize(options.max_peaks);

  int max_depth_used = 0;
  for (int i : peaks) {
    double lo = std::max(0.0, spacing * (i - 1));
    double hi = std::min(omega_cap, spacing * (i + 1));
    double center = spacing * i;
    double peak = values[i];
    double settled = peak;
    int quiet = 0;
    int depth = 0;
    while (depth < options.max_depth && hi - lo > 1e-13 * (1.0 + std::abs(center))) {
      ++depth;
      const double m1 = lo + (hi - lo) / 3.0;
      const double m2 = hi - (hi - lo) / 3.0;
      const double v1 = objective(m1);
      const double v2 = objective(m2);
      if (v1 > peak) peak = v1, center = m1;
      if (v2 > peak) peak = v2, center = m2;
      if (v1 < v2)
        lo = m1;
      else
        hi = m2;
      quiet = peak - settled < options.refine_tol ? quiet + 1 : 0;
      settled = peak;
      if (depth >= 8 && quiet >= 4) break;
    }
    max_depth_used = std::max(max_depth_used, depth);
    if (peak > result.sup) {
      result.sup = peak;
      result.worst_omega = center;
    }
  }
  result.sweep.depth = max_depth_used;
  return result;
}

FrequencyResult verify_frequency_condition(const DelaySystem& sys, const QuadForm& form, double nu,
                                           const SweepOptions& options) {
  if (form.r() != sys.r() || form.m() != sys.m())
    throw DimensionError("quadratic form dimensions do not match the system");
  const auto [omega, cap] = choose_omega(
      sys, nu, options.max_omega, [&](double w) { return tail_cap(sys, form, nu, w); });
  auto objective = [&](double w) {
    return lambda_max(hermitian_form_at(form, eval_transfer(sys, Complex(-nu, w))));
  };
  FrequencyResult result = sweep_sup(objective, omega, options);
  result.tail_bound = cap;
  return result;
}

namespace {

constexpr const char* kScUnstable =
    "SC with unstable roots gives neither stability nor an inertial manifold";

Verdict verdict_from_margin(double margin) {
  if (margin > kStrictMargin) return Verdict::Certified;
  if (margin > 0.0) return Verdict::Inconclusive;
  return Verdict::Rejected;
}

// Fills j/kind; returns false (with an Inconclusive certificate) when the
// root count fails.
bool attach_root_count(const DelaySystem& sys, double nu, Certificate& cert) {
  try {
    const RootCount rc = count_roots_right_of(sys, nu);
    cert.j = rc.count;
    cert.kind = rc.count == 0 ? CertificateKind::Stability : CertificateKind::InertialManifold;
    return true;
  } catch (const RootOnLine& e) {
    cert.verdict = Verdict::Inconclusive;
    cert.note = std::string(e.what());
  } catch (const NonIntegerWinding& e) {
    cert.verdict = Verdict::Inconclusive;
    cert.note = std::string(e.what());
  }
  return false;
}

template <class Body>
Certificate guarded(Certificate cert, Body&& body) {
  try {
    body(cert);
  } catch (const SingularAtP& e) {
    cert.verdict = Verdict::Inconclusive;
    cert.note = e.what();
  } catch (const TailUnbounded& e) {
    cert.verdict = Verdict::Inconclusive;
    cert.note = e.what();
  } catch (const OverflowError& e) {
    cert.verdict = Verdict::Inconclusive;
    cert.note = e.what();
  }
  return cert;
}

}  // namespace

Certificate smith_check(const DelaySystem& sys, double lambda, double nu,
                        const SweepOptions& options) {
  if (!(lambda > 0.0)) throw ConfigError("Lipschitz constant must be > 0");
  Certificate cert;
  cert.check = "smith";
  cert.nu = nu;
  if (!attach_root_count(sys, nu, cert)) return cert;
  return guarded(std::move(cert), [&](Certificate& c) {
    const double bound = 1.0 / lambda;
    const auto [omega, w_tail] = choose_omega(sys, nu, options.max_omega, [&](double w) {
      return transfer_tail_norm(sys, nu, w) - bound;
    });
    auto objective = [&](double w) { return spectral_norm(eval_transfer(sys, Complex(-nu, w))); };
    const FrequencyResult r = sweep_sup(objective, omega, options);
    c.sup_value = r.sup;
    c.worst_omega = r.worst_omega;
    c.sweep = r.sweep;
    c.tail_bound = w_tail + bound;
    c.margin = bound - r.sup;
    c.verdict = verdict_from_margin(c.margin);
  });
}

FrequencyResult circle_frequency(const DelaySystem& sys, double k1, double k2, double nu,
                                 const SweepOptions& options) {
  if (sys.r() != 1 || sys.m() != 1) throw DimensionError("circle criterion needs a scalar plant (r = m = 1)");
  const QuadForm form = sector_form(k1, k2);
  const auto [omega, cap] = choose_omega(
      sys, nu, options.max_omega, [&](double w) { return tail_cap(sys, form, nu, w); });
  auto objective = [&](double w) {
    const Complex z = eval_transfer(sys, Complex(-nu, w))(0, 0);
    return -(std::conj(1.0 + k1 * z) * (1.0 + k2 * z)).real();
  };
  FrequencyResult r = sweep_sup(objective, omega, options);
  r.tail_bound = cap;
  return r;
}

Certificate circle_check(const DelaySystem& sys, double k1, double k2, double nu,
                         const SweepOptions& options, Mode mode) {
  if (sys.r() != 1 || sys.m() != 1) throw DimensionError("circle_check needs a scalar plant (r = m = 1)");
  if (k1 > k2) throw ConfigError("circle_check requires kappa1 <= kappa2");
  if (mode == Mode::SC && !(k1 < 0.0 && 0.0 < k2))
    throw ConfigError("sector condition (SC) requires kappa1 < 0 < kappa2");
  Certificate cert;
  cert.check = "circle";
  cert.nu = nu;
  if (!attach_root_count(sys, nu, cert)) return cert;
  if (mode == Mode::SC && *cert.j > 0) {
    cert.verdict = Verdict::Inconclusive;
    cert.note = kScUnstable;
    return cert;
  }
  return guarded(std::move(cert), [&](Certificate& c) {
    const FrequencyResult r = circle_frequency(sys, k1, k2, nu, options);
    c.sup_value = r.sup;
    c.worst_omega = r.worst_omega;
    c.sweep = r.sweep;
    c.tail_bound = r.tail_bound;
    c.margin = -r.sup;
    c.verdict = verdict_from_margin(c.margin);
  });
}

Certificate certify(const DelaySystem& sys, const Nonlinearity& f, double nu, Mode mode,
                    const SweepOptions& options) {
  if (f.input_dim() != sys.r() || f.output_dim() != sys.m())
    throw DimensionError("nonlinearity dimensions do not match the plant (r, m)");

  const bool scalar = sys.r() == 1 && sys.m() == 1;
  std::optional<QuadForm> form;
  bool incremental = false;
  if (scalar && f.sector()) {
    const SectorBound s = *f.sector();
    if (mode == Mode::SC && !(s.k1 < 0.0 && 0.0 < s.k2))
      throw ConfigError("sector condition (SC) requires kappa1 < 0 < kappa2");
    form = sector_form(s.k1, s.k2);
    incremental = s.incremental;
  } else if (f.lipschitz()) {
    form = lipschitz_form(f.lipschitz()->lambda, sys.r(), sys.m());
    incremental = f.lipschitz()->incremental;
  } else {
    throw ConfigError(
        "nonlinearity needs sector metadata (scalar plants) or Lipschitz metadata to be certified");
  }
  if (mode == Mode::MSC && !incremental)
    throw ConfigError("MSC needs incremental (N2/L2) bounds on the nonlinearity");
  if (mode == Mode::SC) {
    const Vector zero = Vector::Zero(sys.r());
    if (f(zero).norm() != 0.0) throw ConfigError("SC needs F(0) = 0");
  }

  Certificate cert;
  cert.check = "quadform";
  cert.nu = nu;
  if (!attach_root_count(sys, nu, cert)) {
    cert.note += "; perturb nu and retry";
    return cert;
  }
  if (mode == Mode::SC && *cert.j > 0) {
    cert.verdict = Verdict::Inconclusive;
    cert.note = kScUnstable;
    return cert;
  }
  return guarded(std::move(cert), [&](Certificate& c) {
    const FrequencyResult r = verify_frequency_condition(sys, *form, nu, options);
    c.sup_value = r.sup;
    c.worst_omega = r.worst_omega;
    c.sweep = r.sweep;
    c.tail_bound = r.tail_bound;
    c.margin = -r.sup;
    c.verdict = verdict_from_margin(c.margin);
  });
}

}  // namespace delaycert
