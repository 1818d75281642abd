// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <fftw3.h>

#include <complex>
#include <map>
#include <mutex>
#include <stdexcept>
#include <utility>
#include <vector>

namespace rlab::fft {

using cplx = std::complex<double>;

enum class Direction { Forward = FFTW_FORWARD, Backward = FFTW_BACKWARD };

namespace detail {

struct PlanCache {
  std::mutex mu;
  std::map<std::pair<std::vector<int>, int>, fftw_plan> plans;
  ~PlanCache() {
    for (auto& kv : plans) fftw_destroy_plan(kv.second);
  }
};

inline PlanCache& cache() {
  static PlanCache c;
  return c;
}

// The planner is not thread safe; execution through the new-array interface
// is, so plans are shared across callers once created.
inline fftw_plan plan_for(const std::vector<int>& dims, int sign) {
  auto& c = cache();
  std::lock_guard<std::mutex> lk(c.mu);
  auto key = std::make_pair(dims, sign);
  auto it = c.plans.find(key);
  if (it != c.plans.end()) return it->second;
  std::size_t n = 1;
  for (int d : dims) n *= static_cast<std::size_t>(d);
  fftw_complex* scratch = fftw_alloc_complex(n);
  fftw_plan p = fftw_plan_dft(static_cast<int>(dims.size()), dims.data(), scratch, scratch, sign,
                              FFTW_ESTIMATE | FFTW_UNALIGNED);
  fftw_free(scratch);
  if (!p) throw std::runtime_error("fftw planning failed");
  c.plans.emplace(key, p);
  return p;
}

}  // namespace detail

// Unnormalized in-place transform of a row-major array with the given shape.
// Forward uses exp(-2 pi i jk/n), Backward exp(+2 pi i jk/n).
inline void transform(std::vector<cplx>& data, const std::vector<std::size_t>& shape, Direction dir) {
  std::vector<int> dims;
  std::size_t n = 1;
  for (auto s : shape) {
    dims.push_back(static_cast<int>(s));
    n *= s;
  }
  if (n != data.size()) throw std::invalid_argument("fft shape does not match data");
  if (n == 0) return;
  fftw_plan p = detail::plan_for(dims, static_cast<int>(dir));
  auto* ptr = reinterpret_cast<fftw_complex*>(data.data());
  fftw_execute_dft(p, ptr, ptr);
}

// Signed frequency index of bin m in a length-n transform.
inline long signed_index(std::size_t m, std::size_t n) {
  long mm = static_cast<long>(m), nn = static_cast<long>(n);
  return mm < (nn + 1) / 2 ? mm : mm - nn;
}

}  // namespace rlab::fft
