#pragma once

#include "nonhom/norms.hpp"

namespace nonhom {

struct BesicovichSelection {
  std::vector<int> selected;  ///< indices into the candidate list
  int max_overlap = 0;        ///< max multiplicity of selected cubes at candidate centers
};

/// Greedy almost-disjoint selection: repeatedly take the largest remaining
/// cube whose center is not inside any already-selected cube. Every candidate
/// center ends up covered. Ties break by center (lexicographic), then index.
BesicovichSelection besicovich_cover(const std::vector<Cube>& candidates);

struct CzOptions {
  std::vector<double> eta_grid = {2.5, 3.0, 4.0, 8.0, 16.0};
  int max_repair_rounds = 8;
};

/// Stopping cubes of the decomposition at level lambda, with the post-hoc
/// dilate checks on the eta grid. Residual grid violations that no dyadic
/// shrink can clear are recorded, never silently dropped.
struct StoppingCubes {
  std::vector<Cube> cubes;
  int max_overlap = 0;
  int shrink_steps = 0;
  std::vector<std::pair<int, double>> residual_eta;  // (cube index, eta)
};

/// Part a of the decomposition. Empty result when |f| <= lambda everywhere.
/// Requires lambda > beta_d ||f||_1 / ||mu|| (the measure is always finite
/// here). p >= 1.
StoppingCubes cz_stopping_cubes(const DiscreteMeasure& mu, const AnalysisContext& ctx,
                                const RealFunction& f, double p, double lambda,
                                const CzOptions& opt = {});

/// Part c companions: smallest (6, 6^(n+1))-doubling cube of {6^k Q_i}, k>=1.
std::vector<Cube> cz_companions(const DiscreteMeasure& mu, const AnalysisContext& ctx,
                                const std::vector<Cube>& cubes);

struct PhiFamily {
  std::vector<RealFunction> phis;  ///< aligned with the stopping cubes
  double b_used = 0.0;             ///< realized sup of sum |phi_i| / lambda
};

/// Part b correction functions phi_i = alpha_i * chi_{A_i}, built sequentially
/// in nondecreasing companion size (ties by center then index), with the
/// data-driven Chebyshev threshold keeping mu(A_i) >= mu(R_i)/2.
PhiFamily cz_phi(const DiscreteMeasure& mu, const AnalysisContext& ctx,
                 const RealFunction& f, const std::vector<Cube>& stopping,
                 const std::vector<Cube>& companions,
                 const std::vector<RealFunction>& weights, double lambda, double p);

/// Full output of the constructive decomposition f = good + sum (f w_i - phi_i).
struct CzDecomposition {
  double lambda = 0.0;
  double p = 2.0;
  std::vector<Cube> stopping_cubes;
  std::vector<Cube> companions;
  std::vector<RealFunction> weights;
  std::vector<RealFunction> phis;
  RealFunction good;
  std::vector<AtomicBlock> bad_blocks;
  double h1_upper = 0.0;  ///< sum of p-block certificates sum_j |lambda_j|
  double b_used = 0.0;

  // Certificates (all computed, none assumed).
  double reconstruction_residual = 0.0;  ///< max |f - recon| / max|f|
  double cc4_residual = 0.0;             ///< max relative moment mismatch
  double cc6_constant = 0.0;             ///< realized constant in the phi size bound
  double cc7_ratio = 0.0;                ///< h1_upper * lambda^(p-1) / ||f||_p^p
  double good_sup = 0.0;                 ///< ||good||_inf
  int max_overlap = 0;
  int shrink_steps = 0;
  std::vector<std::pair<int, double>> residual_eta;
  bool blocks_valid = true;
  std::vector<std::string> block_violations;
};

CzDecomposition cz_decompose(const DiscreteMeasure& mu, const AnalysisContext& ctx,
                             const RealFunction& f, double p, double lambda,
                             const CzOptions& opt = {});

}  // namespace nonhom
