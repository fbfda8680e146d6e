#ifndef DEGEN_TANGENTIAL_TRANSFORM_HPP
#define DEGEN_TANGENTIAL_TRANSFORM_HPP

#include <fftw3.h>

#include <complex>
#include <cstring>
#include <memory>
#include <mutex>
#include <span>
#include <stdexcept>
#include <vector>

namespace degen {

namespace detail {
inline std::mutex& fftw_planner_mutex()
{
  static std::mutex m;
  return m;
}
} // namespace detail

/// Real DFT along the periodic tangential axis for `rows` contiguous rows of
/// length Mx. Spectrum layout: row-major, Mx/2+1 complex modes per row.
/// Forward is unnormalized; inverse divides by Mx.
class TangentialTransform {
public:
  TangentialTransform(int Mx, int rows) : Mx_(Mx), rows_(rows), modes_(Mx / 2 + 1)
  {
    real_ = static_cast<double*>(fftw_malloc(sizeof(double) * Mx_ * rows_));
    spec_ = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * modes_ * rows_));
    if (!real_ || !spec_) throw std::bad_alloc();
    std::lock_guard lock(detail::fftw_planner_mutex());
    int n[] = {Mx_};
    forward_ = fftw_plan_many_dft_r2c(1, n, rows_, real_, nullptr, 1, Mx_, spec_, nullptr, 1, modes_,
                                      FFTW_ESTIMATE);
    inverse_ = fftw_plan_many_dft_c2r(1, n, rows_, spec_, nullptr, 1, modes_, real_, nullptr, 1, Mx_,
                                      FFTW_ESTIMATE);
  }

  TangentialTransform(const TangentialTransform&) = delete;
  TangentialTransform& operator=(const TangentialTransform&) = delete;

  ~TangentialTransform()
  {
    std::lock_guard lock(detail::fftw_planner_mutex());
    fftw_destroy_plan(forward_);
    fftw_destroy_plan(inverse_);
    fftw_free(real_);
    fftw_free(spec_);
  }

  int modes() const { return modes_; }
  int rows() const { return rows_; }

  void forward(std::span<const double> in, std::span<std::complex<double>> out)
  {
    std::memcpy(real_, in.data(), sizeof(double) * Mx_ * rows_);
    fftw_execute(forward_);
    std::memcpy(static_cast<void*>(out.data()), spec_, sizeof(fftw_complex) * modes_ * rows_);
  }

  void inverse(std::span<const std::complex<double>> in, std::span<double> out)
  {
    std::memcpy(spec_, in.data(), sizeof(fftw_complex) * modes_ * rows_);
    fftw_execute(inverse_);
    const double scale = 1.0 / Mx_;
    for (int k = 0; k < Mx_ * rows_; ++k) out[k] = real_[k] * scale;
  }

private:
  int Mx_, rows_, modes_;
  double* real_ = nullptr;
  fftw_complex* spec_ = nullptr;
  fftw_plan forward_ = nullptr;
  fftw_plan inverse_ = nullptr;
};

} // namespace degen

#endif // DEGEN_TANGENTIAL_TRANSFORM_HPP
