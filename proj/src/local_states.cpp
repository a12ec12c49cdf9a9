#include "sqz/local_states.hpp"

#include <cmath>
#include <string>

namespace sqz {

namespace {

WsDecomposition block_ws(const LocalBlock& b) { return ws_from_beta(b.R, b.tau, b.first); }

void check_window(const LocalBlock& b, double t) {
  if (!b.contains_time(t))
    throw Error(ErrorKind::InvalidArgument, "local block: time " + std::to_string(t) + " outside the block window");
}

} // namespace

bool LocalBlock::contains_time(double t) const {
  return std::abs(t - center_index * tau) <= 0.5 * d * tau * (1.0 + 1e-12);
}

int nearest_index(double t, double tau) {
  const double x = t / tau;
  const double f = std::floor(x);
  const double frac = x - f;
  if (frac > 0.5) return static_cast<int>(f) + 1;
  if (frac < 0.5) return static_cast<int>(f);
  return x > 0.0 ? static_cast<int>(f) : static_cast<int>(f) + 1;
}

void check_disjoint(const LocalBlock& a, const LocalBlock& b) {
  if (2 * std::abs(a.center_index - b.center_index) < a.d + b.d)
    throw Error(ErrorKind::Overlap, "local blocks centred at indices " + std::to_string(a.center_index) + " and " +
                                        std::to_string(b.center_index) + " overlap");
}

std::vector<LocalBlock> extract_blocks(const WsDecomposition& ws, const std::vector<double>& centers,
                                       const std::vector<int>& d) {
  if (d.size() != centers.size() && d.size() != 1)
    throw Error(ErrorKind::InvalidArgument, "local blocks: need one width or one per centre");
  std::vector<LocalBlock> out;
  for (size_t j = 0; j < centers.size(); ++j) {
    LocalBlock b;
    b.d = d.size() == 1 ? d[0] : d[j];
    if (b.d < 1 || b.d % 2 == 0) throw Error(ErrorKind::InvalidArgument, "local blocks: width must be odd and positive");
    b.tau = ws.tau;
    b.center_time = centers[j];
    b.center_index = nearest_index(centers[j], ws.tau);
    b.first = b.center_index - b.d / 2;
    if (b.first < ws.n_min || b.last() > ws.n_max())
      throw Error(ErrorKind::InvalidArgument, "local blocks: block at t = " + std::to_string(centers[j]) + " leaves the sample range");
    for (const LocalBlock& prev : out) check_disjoint(prev, b);
    const int off = b.first - ws.n_min;
    b.R = ws.beta_matrix.block(off, off, b.d, b.d);
    const CMatrix rows = ws.beta_matrix.middleRows(off, b.d);
    b.leakage = std::sqrt(std::max(0.0, rows.squaredNorm() - b.R.squaredNorm()));
    b.factors = bogoliubov(b.R);
    b.n_photons = ws_n_pulse(b.factors);
    out.push_back(std::move(b));
  }
  return out;
}

std::vector<LocalBlock> extract_blocks(const WsDecomposition& ws, const std::vector<double>& centers, int d) {
  return extract_blocks(ws, centers, std::vector<int>{d});
}

G1Result local_g1(const LocalBlock& block, const RVector& times) {
  for (Eigen::Index j = 0; j < times.size(); ++j) check_window(block, times(j));
  return g1_ws(block_ws(block), block.factors, times);
}

G2Result local_g2(const LocalBlock& block, const RVector& times) {
  for (Eigen::Index j = 0; j < times.size(); ++j) check_window(block, times(j));
  return g2_ws(block_ws(block), block.factors, times);
}

double local_g1_at(const LocalBlock& block, double t) {
  RVector ts(1);
  ts << t;
  return local_g1(block, ts).g1(0);
}

double cross_block_g2(const LocalBlock& a, const LocalBlock& b, double ta, double tb) {
  check_disjoint(a, b);
  return local_g1_at(a, ta) * local_g1_at(b, tb);
}

DisentangledData disentangle(const LocalBlock& block) {
  const Polar& p = block.factors.polar;
  DisentangledData d;
  d.T = p.U * herm_fn(p.p_eigen, HermFn::Tanh).value;
  d.L = herm_fn(p.q_eigen, HermFn::LnSech).value;
  d.w_half = std::exp(0.5 * log_det_sech(p.q_eigen));
  return d;
}

WeakKet weak_ket_expansion(const LocalBlock& block) {
  const DisentangledData dd = disentangle(block);
  WeakKet k;
  k.n_photons = block.n_photons;
  k.n_weak = block.R.squaredNorm();
  const double tn = dd.T.norm();
  k.two_photon = tn > 0.0 ? CMatrix(dd.T / tn) : CMatrix::Zero(block.d, block.d);
  const double w = dd.w_half * dd.w_half;
  k.norm_defect = std::abs(1.0 - w * (1.0 + 0.5 * tn * tn));
  k.valid = k.n_photons < 1.0;
  return k;
}

BlockWidth default_block_width(double beta_ring_mag) {
  if (beta_ring_mag <= 0.1) return {7, false};
  if (beta_ring_mag <= 1.0) return {11, false};
  return {11, true};
}

std::vector<double> tiling_centers(const WsDecomposition& ws, int d) {
  std::vector<double> c;
  for (int first = ws.n_min; first + d - 1 <= ws.n_max(); first += d) c.push_back((first + d / 2) * ws.tau);
  return c;
}

} // namespace sqz
