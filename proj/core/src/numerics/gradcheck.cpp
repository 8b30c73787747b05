#include "ira/numerics/gradcheck.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

#include "ira/error.hpp"

namespace ira::numerics {

double finite_diff_check(const ScalarFunction& f, std::span<const double> params,
                         std::span<const double> analytic_grad, std::size_t probe_count, double h,
                         Rng& rng) {
  if (params.size() != analytic_grad.size()) {
    throw DimensionError("finite_diff_check: gradient and parameter sizes differ");
  }
  if (!(h > 0.0)) throw Error("finite_diff_check: step must be positive");
  const std::size_t n = params.size();

  std::vector<std::size_t> coords(n);
  std::iota(coords.begin(), coords.end(), std::size_t{0});
  const std::size_t probes = std::min(probe_count, n);
  // Partial Fisher-Yates: the first `probes` slots become the sample.
  for (std::size_t i = 0; i < probes; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(rng.uniform_index(n - i));
    std::swap(coords[i], coords[j]);
  }

  std::vector<double> work(params.begin(), params.end());
  double worst = 0.0;
  for (std::size_t p = 0; p < probes; ++p) {
    const std::size_t c = coords[p];
    work[c] = params[c] + h;
    const double up = f(work);
    work[c] = params[c] - h;
    const double down = f(work);
    work[c] = params[c];
    const double numeric = (up - down) / (2.0 * h);
    const double err = std::abs(analytic_grad[c] - numeric) / std::max(1e-8, std::abs(numeric));
    if (!std::isfinite(err)) return std::numeric_limits<double>::infinity();
    worst = std::max(worst, err);
  }
  return worst;
}

}  // namespace ira::numerics
