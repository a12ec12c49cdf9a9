#pragma once

// Default-grid decompositions shared across test cases; each is computed
// once per process.

#include "sqz/schmidt.hpp"

namespace fixture {

struct Decomposed {
  sqz::Model model;
  sqz::AmplitudeGrid grid;
  sqz::SchmidtDecomposition dec;
  sqz::Widths widths;
};

inline const Decomposed& double_gaussian() {
  static const Decomposed d = [] {
    Decomposed x{sqz::make_double_gaussian(1.0, 50.0), {}, {}, {}};
    x.grid = sqz::discretize(x.model);
    x.dec = sqz::schmidt_numeric(x.grid);
    x.widths = sqz::widths(x.model);
    return x;
  }();
  return d;
}

inline const Decomposed& sinc_hat() {
  static const Decomposed d = [] {
    Decomposed x{sqz::make_sinc_hat(24.0, 1.0), {}, {}, {}};
    x.grid = sqz::discretize(x.model);
    x.dec = sqz::schmidt_numeric(x.grid);
    x.widths = sqz::widths(x.model);
    return x;
  }();
  return d;
}

} // namespace fixture
