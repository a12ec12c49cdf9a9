#pragma once

#include <vector>

#include "sqz/ws.hpp"

namespace sqz {

// d x d block of the squeezing matrix centred on sample index n_J.
struct LocalBlock {
  double center_time = 0.0;
  int center_index = 0;
  int d = 0;
  int first = 0;
  double tau = 0.0;
  CMatrix R;
  double n_photons = 0.0;
  // Frobenius norm of the block rows of beta outside the block columns.
  double leakage = 0.0;
  BogoliubovFactors factors;

  int last() const { return first + d - 1; }
  bool contains_time(double t) const;
};

// Nearest integer to t / tau, ties toward zero.
int nearest_index(double t, double tau);

std::vector<LocalBlock> extract_blocks(const WsDecomposition& ws, const std::vector<double>& centers,
                                       const std::vector<int>& d);
std::vector<LocalBlock> extract_blocks(const WsDecomposition& ws, const std::vector<double>& centers, int d);

void check_disjoint(const LocalBlock& a, const LocalBlock& b);

G1Result local_g1(const LocalBlock& block, const RVector& times);
G2Result local_g2(const LocalBlock& block, const RVector& times);
double local_g1_at(const LocalBlock& block, double t);

double cross_block_g2(const LocalBlock& a, const LocalBlock& b, double ta, double tb);

struct DisentangledData {
  CMatrix T;
  CMatrix L;
  double w_half = 1.0;
};

DisentangledData disentangle(const LocalBlock& block);

struct WeakKet {
  double n_photons = 0.0;
  double n_weak = 0.0;
  // T / ||T||_F; zero for the vacuum block.
  CMatrix two_photon;
  double norm_defect = 0.0;
  bool valid = true;
};

WeakKet weak_ket_expansion(const LocalBlock& block);

struct BlockWidth {
  int d = 7;
  bool warn = false;
};

BlockWidth default_block_width(double beta_ring_mag);

// Centres of back-to-back width-d blocks across the index range of ws.
std::vector<double> tiling_centers(const WsDecomposition& ws, int d);

} // namespace sqz
