#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <Eigen/SVD>

#include "edgesym/error.hpp"
#include "edgesym/tolerance.hpp"

namespace edgesym {

/// Rigid motion x -> linear * x + translation, with linear orthogonal
/// (determinant +1 for proper motions, -1 when a reflection is involved).
template <int Dim>
struct Isometry {
  static_assert(Dim == 2 || Dim == 3, "isometries are supported in dimension 2 and 3");

  Mat<Dim> linear = Mat<Dim>::Identity();
  Vec<Dim> translation = Vec<Dim>::Zero();

  static Isometry identity() { return {}; }

  Vec<Dim> operator()(const Vec<Dim>& p) const { return linear * p + translation; }

  /// x -> a(b(x))
  friend Isometry operator*(const Isometry& a, const Isometry& b) {
    return {a.linear * b.linear, a.linear * b.translation + a.translation};
  }

  Isometry inverse() const {
    Mat<Dim> inv = linear.transpose();
    return {inv, -(inv * translation)};
  }

  double determinant() const { return linear.determinant(); }
  int orientation() const { return determinant() < 0.0 ? -1 : 1; }

  /// max |Q^T Q - I| entry.
  double orthogonality_defect() const {
    return (linear.transpose() * linear - Mat<Dim>::Identity()).cwiseAbs().maxCoeff();
  }
};

template <int Dim>
Vec<Dim> apply_isometry(const Isometry<Dim>& iso, const Vec<Dim>& p) {
  return iso(p);
}

template <int Dim>
struct IsometryFit {
  Isometry<Dim> isometry;
  double rmsd = 0.0;
  /// Set when fewer than Dim points were supplied; the fit is then one of
  /// infinitely many optimal ones.
  bool underdetermined = false;
};

template <int Dim>
double rms_residual(const Isometry<Dim>& iso, std::span<const Vec<Dim>> src,
                    std::span<const Vec<Dim>> dst) {
  double sum = 0.0;
  for (std::size_t i = 0; i < src.size(); ++i) {
    sum += (iso(src[i]) - dst[i]).squaredNorm();
  }
  return std::sqrt(sum / static_cast<double>(src.size()));
}

/// Least-squares rigid alignment of src onto dst (orthogonal Procrustes on
/// the centred point sets). With allow_reflection the linear part ranges
/// over all of O(d); otherwise it is restricted to SO(d).
template <int Dim>
IsometryFit<Dim> best_fit_isometry(std::span<const Vec<Dim>> src, std::span<const Vec<Dim>> dst,
                                   bool allow_reflection = true) {
  if (src.size() != dst.size()) {
    throw Error(ErrorKind::LengthMismatch, "best_fit_isometry: " + std::to_string(src.size()) +
                                               " source points vs " + std::to_string(dst.size()) +
                                               " target points");
  }
  if (src.empty()) {
    throw Error(ErrorKind::InvalidArgument, "best_fit_isometry: empty point sets");
  }
  const double n = static_cast<double>(src.size());
  Vec<Dim> src_centroid = Vec<Dim>::Zero();
  Vec<Dim> dst_centroid = Vec<Dim>::Zero();
  for (std::size_t i = 0; i < src.size(); ++i) {
    src_centroid += src[i];
    dst_centroid += dst[i];
  }
  src_centroid /= n;
  dst_centroid /= n;

  Mat<Dim> cross = Mat<Dim>::Zero();
  for (std::size_t i = 0; i < src.size(); ++i) {
    cross += (src[i] - src_centroid) * (dst[i] - dst_centroid).transpose();
  }
  Eigen::JacobiSVD<Mat<Dim>> svd(cross, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Mat<Dim> rotation = svd.matrixV() * svd.matrixU().transpose();
  if (!allow_reflection && rotation.determinant() < 0.0) {
    Mat<Dim> flip = Mat<Dim>::Identity();
    flip(Dim - 1, Dim - 1) = -1.0;
    rotation = svd.matrixV() * flip * svd.matrixU().transpose();
  }

  IsometryFit<Dim> fit;
  fit.isometry.linear = rotation;
  fit.isometry.translation = dst_centroid - rotation * src_centroid;
  fit.rmsd = rms_residual<Dim>(fit.isometry, src, dst);
  fit.underdetermined = src.size() < static_cast<std::size_t>(Dim);
  return fit;
}

template <int Dim>
IsometryFit<Dim> best_fit_isometry(const std::vector<Vec<Dim>>& src,
                                   const std::vector<Vec<Dim>>& dst,
                                   bool allow_reflection = true) {
  return best_fit_isometry<Dim>(std::span<const Vec<Dim>>(src), std::span<const Vec<Dim>>(dst),
                                allow_reflection);
}

}  // namespace edgesym
