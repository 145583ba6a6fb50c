#pragma once

#include <fftw3.h>

#include <complex>
#include <mutex>
#include <utility>

#include "jamscan/core/errors.hpp"
#include "jamscan/core/types.hpp"

namespace jamscan::cyclo {

namespace detail {
// FFTW's planner is not reentrant; execution is.
inline std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

inline fftw_complex* as_fftw(Complex* p) { return reinterpret_cast<fftw_complex*>(p); }
}  // namespace detail

enum class FftDirection { Forward = FFTW_FORWARD, Backward = FFTW_BACKWARD };

// Batched, contiguous, unnormalized complex DFT. Planned with
// FFTW_UNALIGNED so execute() may be handed any buffers of the planned shape.
class FftPlan {
 public:
  FftPlan(int n, int batch, Complex* in, Complex* out, FftDirection dir = FftDirection::Forward)
      : n_(n), batch_(batch) {
    if (n <= 0 || batch <= 0) throw DomainError("FFT size and batch must be positive");
    std::lock_guard<std::mutex> lock(detail::planner_mutex());
    plan_ = fftw_plan_many_dft(1, &n_, batch_, detail::as_fftw(in), nullptr, 1, n_, detail::as_fftw(out),
                               nullptr, 1, n_, static_cast<int>(dir), FFTW_ESTIMATE | FFTW_UNALIGNED);
    if (plan_ == nullptr) throw Error("FFTW failed to create a plan");
  }

  FftPlan(const FftPlan&) = delete;
  FftPlan& operator=(const FftPlan&) = delete;
  FftPlan(FftPlan&& o) noexcept : plan_(std::exchange(o.plan_, nullptr)), n_(o.n_), batch_(o.batch_) {}
  FftPlan& operator=(FftPlan&& o) noexcept {
    if (this != &o) {
      reset();
      plan_ = std::exchange(o.plan_, nullptr);
      n_ = o.n_;
      batch_ = o.batch_;
    }
    return *this;
  }
  ~FftPlan() { reset(); }

  void execute(Complex* in, Complex* out) const {
    fftw_execute_dft(plan_, detail::as_fftw(in), detail::as_fftw(out));
  }

  int size() const { return n_; }
  int batch() const { return batch_; }

 private:
  void reset() {
    if (plan_ != nullptr) {
      std::lock_guard<std::mutex> lock(detail::planner_mutex());
      fftw_destroy_plan(plan_);
      plan_ = nullptr;
    }
  }

  fftw_plan plan_ = nullptr;
  int n_ = 0;
  int batch_ = 0;
};

inline bool is_power_of_two(std::size_t v) { return v != 0 && (v & (v - 1)) == 0; }

inline std::size_t next_power_of_two(std::size_t v) {
  std::size_t p = 1;
  while (p < v) p <<= 1;
  return p;
}

}  // namespace jamscan::cyclo
