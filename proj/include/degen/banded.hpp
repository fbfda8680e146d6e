#ifndef DEGEN_BANDED_HPP
#define DEGEN_BANDED_HPP

#include <lapacke.h>

#include <array>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace degen {

/// Square pentadiagonal matrix; row k holds entries for columns k-2..k+2.
struct PentaMatrix {
  std::vector<std::array<double, 5>> rows;

  std::size_t size() const { return rows.size(); }

  double at(std::size_t r, std::size_t c) const
  {
    const auto off = static_cast<std::ptrdiff_t>(c) - static_cast<std::ptrdiff_t>(r);
    if (off < -2 || off > 2) return 0.0;
    return rows[r][off + 2];
  }

  /// y = M x
  void multiply(std::span<const double> x, std::span<double> y) const
  {
    const auto n = static_cast<std::ptrdiff_t>(rows.size());
    for (std::ptrdiff_t r = 0; r < n; ++r) {
      double s = 0.0;
      for (std::ptrdiff_t off = -2; off <= 2; ++off) {
        const std::ptrdiff_t c = r + off;
        if (c >= 0 && c < n) s += rows[r][off + 2] * x[c];
      }
      y[r] = s;
    }
  }

  /// Largest |c - r| with a nonzero entry.
  int bandwidth() const
  {
    int bw = 0;
    for (std::size_t r = 0; r < rows.size(); ++r)
      for (int off = -2; off <= 2; ++off)
        if (rows[r][off + 2] != 0.0) bw = std::max(bw, off < 0 ? -off : off);
    return bw;
  }
};

/// Error raised when a banded factorization meets an exactly zero pivot.
class SingularSystem : public std::runtime_error {
public:
  SingularSystem(const std::string& what, int pivot) : std::runtime_error(what), pivot_(pivot) {}
  int pivot() const { return pivot_; }

private:
  int pivot_;
};

/// LU with partial pivoting confined to the band (LAPACK dgbtrf/dgbtrs).
class BandedLU {
public:
  static constexpr int kl = 2;
  static constexpr int ku = 2;
  static constexpr int ldab = 2 * kl + ku + 1;

  BandedLU() = default;

  explicit BandedLU(const PentaMatrix& m, const std::string& label = "banded system")
      : n_(static_cast<int>(m.size())), ab_(static_cast<std::size_t>(ldab) * m.size(), 0.0), ipiv_(m.size())
  {
    // column-major band storage: A(r,c) -> ab[kl + ku + r - c + c*ldab]
    for (int r = 0; r < n_; ++r)
      for (int off = -kl; off <= ku; ++off) {
        const int c = r + off;
        if (c < 0 || c >= n_) continue;
        ab_[static_cast<std::size_t>(kl + ku + r - c) + static_cast<std::size_t>(c) * ldab] = m.rows[r][off + 2];
      }
    const lapack_int info =
        LAPACKE_dgbtrf(LAPACK_COL_MAJOR, n_, n_, kl, ku, ab_.data(), ldab, ipiv_.data());
    if (info > 0)
      throw SingularSystem(label + ": singular pivot at index " + std::to_string(info - 1),
                           static_cast<int>(info - 1));
    if (info < 0) throw std::invalid_argument(label + ": dgbtrf argument error");
  }

  int size() const { return n_; }

  /// Solves in place; rhs is column-major n x nrhs.
  void solve(std::span<double> rhs, int nrhs = 1) const
  {
    if (rhs.size() != static_cast<std::size_t>(n_) * nrhs) throw std::invalid_argument("BandedLU::solve: size");
    const lapack_int info = LAPACKE_dgbtrs(LAPACK_COL_MAJOR, 'N', n_, kl, ku, nrhs, ab_.data(), ldab,
                                           ipiv_.data(), rhs.data(), n_);
    if (info != 0) throw std::runtime_error("BandedLU::solve: dgbtrs failed");
  }

private:
  int n_ = 0;
  std::vector<double> ab_;
  std::vector<lapack_int> ipiv_;
};

} // namespace degen

#endif // DEGEN_BANDED_HPP
