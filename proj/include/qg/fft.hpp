#pragma once

#include <complex>
#include <map>
#include <memory>
#include <mutex>
#include <vector>

#include <fftw3.h>

#include "qg/grid.hpp"

namespace qg {

// Cached FFTW plans, one pair per grid size.  Plans are created with
// FFTW_ESTIMATE so planning never depends on runtime measurements; that keeps
// results reproducible across machines and runs.  Transforms are full c2c in
// both directions, unnormalized (caller divides by n^2 after the forward).
class FftPlans {
 public:
  static const FftPlans& get(int n) {
    static std::mutex mu;
    static std::map<int, std::unique_ptr<FftPlans>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(n);
    if (it == cache.end())
      it = cache.emplace(n, std::unique_ptr<FftPlans>(new FftPlans(n))).first;
    return *it->second;
  }

  void forward(const std::complex<double>* in, std::complex<double>* out) const {
    // FFTW writes nothing to `in` for out-of-place c2c transforms
    fftw_execute_dft(fwd_,
                     reinterpret_cast<fftw_complex*>(const_cast<std::complex<double>*>(in)),
                     reinterpret_cast<fftw_complex*>(out));
  }

  void backward(const std::complex<double>* in, std::complex<double>* out) const {
    fftw_execute_dft(bwd_,
                     reinterpret_cast<fftw_complex*>(const_cast<std::complex<double>*>(in)),
                     reinterpret_cast<fftw_complex*>(out));
  }

  FftPlans(const FftPlans&) = delete;
  FftPlans& operator=(const FftPlans&) = delete;

  ~FftPlans() {
    fftw_destroy_plan(fwd_);
    fftw_destroy_plan(bwd_);
  }

 private:
  explicit FftPlans(int n) {
    std::vector<std::complex<double>> a(static_cast<std::size_t>(n) * n);
    std::vector<std::complex<double>> b(a.size());
    auto* pa = reinterpret_cast<fftw_complex*>(a.data());
    auto* pb = reinterpret_cast<fftw_complex*>(b.data());
    unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    fwd_ = fftw_plan_dft_2d(n, n, pa, pb, FFTW_FORWARD, flags);
    bwd_ = fftw_plan_dft_2d(n, n, pa, pb, FFTW_BACKWARD, flags);
    if (!fwd_ || !bwd_) throw Error("fft: plan creation failed");
  }

  fftw_plan fwd_;
  fftw_plan bwd_;
};

}  // namespace qg
