#pragma once

#include "bnlab/reduced.hpp"

namespace bnlab {

// Extremal profile U_{x,lambda}(y) = alpha_N (lambda / (1 + lambda^2 |y-x|^2))^{(N-2)/2}.
struct BubbleParams {
  Vec center;
  double lambda = 0;
};

double bubble(int N, const BubbleParams& b, const Vec& y);
double bubble_dlambda(int N, const BubbleParams& b, const Vec& y);
Vec bubble_dcenter(int N, const BubbleParams& b, const Vec& y);

// Boundary correction psi = U - PU: the harmonic function matching the trace
// of U on the boundary. The exact field comes from the provider's harmonic
// solver; the leading-order surrogate alpha_N (N-2) omega_N H(x,y) / lambda^{(N-2)/2}
// is exposed alongside it.
class PsiField {
 public:
  PsiField(const GreenProvider& provider, BubbleParams b);

  double operator()(const Vec& y) const { return exact_(y); }
  double surrogate(const Vec& y) const;
  const BubbleParams& params() const { return b_; }

 private:
  const GreenProvider* provider_;
  BubbleParams b_;
  HarmonicFn exact_;
  double surrogate_scale_;
};

PsiField projection_psi(const GreenProvider& provider, const BubbleParams& b);

// PU = U - psi evaluated at y.
double projected_bubble(int N, const BubbleParams& b, const PsiField& psi, const Vec& y);

// Integral of U_{x1,l1}^{2*-1} U_{x2,l2} over R^N by shells around x1, with
// the ratio against A alpha_N (l1/l2 + l2/l1 + l1 l2 |x1-x2|^2)^{-(N-2)/2}
// (an O(1) quantity in every regime of the argument).
struct InteractionResult {
  double value = 0;
  double bound_ratio = 0;
};
InteractionResult interaction_integral(int N, const BubbleParams& b1, const BubbleParams& b2,
                                       double rel_tol = 1e-8);

// Mass of the critical power, integral of U^{2*} over R^N (= S^{N/2}).
double bubble_mass_two_star(int N);

// Defect of the multi-bubble ansatz sum_j PU_j as an approximate solution:
// discrete L2 residual over a fixed interior grid plus the energy functional.
struct AnsatzReport {
  double l2_residual = 0;
  double energy = 0;
};
AnsatzReport ansatz_residual(const GreenProvider& provider, const ProblemParams& params,
                             const Config& config);

}  // namespace bnlab
