#pragma once

// Generalized prediction-correction engine: iterate/prediction types, the
// materialized per-iteration matrices, numerical checks of the convergence
// conditions, ergodic averaging and gap metrics.
//
// Notation: v is the correction-space vector of a method, v' the reference
// point (the certified saddle in all experiments), z the strong-convexity
// anchor whose distance enters the prediction inequality with weight sigma.

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "pcrate/linalg/dense.hpp"
#include "pcrate/problems.hpp"

namespace pcrate::framework {

using linalg::DenseMatrix;
using linalg::DenseVector;
using problems::BlockProblem;
using problems::SaddlePoint;

struct IterateState {
  std::vector<DenseVector> x_blocks;
  DenseVector lambda;
  DenseVector v;
  std::size_t k = 0;
  /// x of the previous iterate; equal to x_blocks at k = 0. Needed by
  /// methods whose potential term looks one step back.
  std::vector<DenseVector> prev_x_blocks;
};

struct Prediction {
  std::vector<DenseVector> x_tilde_blocks;
  DenseVector lambda_tilde;
  DenseVector v_tilde;
};

struct PcMatrices {
  DenseMatrix Q, M, H, G, H0;

  std::size_t dim() const noexcept { return Q.rows(); }
  /// Throws ShapeError unless all five are square of the same size.
  void require_consistent_shapes() const;
};

struct CertRecord {
  std::size_t k = 0;
  double r_k = 0.0;
  double theta_k = 0.0;
  double theta_next = 0.0;
  DenseVector z_k;
  DenseVector z_prime;
  DenseMatrix R;
  double sigma_used = 0.0;
  double cc1_residual = 0.0;
  double cc3_slack = 0.0;
};

/// F(u) = ((-A_i^T lambda)_i, A x - b).
DenseVector residual_F(const BlockProblem& problem, const std::vector<DenseVector>& x_blocks,
                       const DenseVector& lambda);

/// ||Q - H M||_F
double check_cc1(const PcMatrices& m);
/// ||G - (Q^T + Q - M^T H M)||_F
double check_cc2(const PcMatrices& m);

/// |(v' - v~)^T Q (v - v~) - [1/2(||v+ - v'||_H^2 - ||v - v'||_H^2) + 1/2 ||v - v~||_G^2]|
/// with v+ = v - M (v - v~).
double lemma2_identity_check(const PcMatrices& m, const DenseVector& v_k, const DenseVector& v_tilde,
                             const DenseVector& v_ref);

/// LHS - RHS of the additional convergence condition:
///   r (||v+ - v'||_H^2 + sigma ||z - z'||_R^2 - ||v - v'||_H^2 + ||v - v~||_G^2)
///     >= ||v+ - v'||_{H0+}^2 - ||v - v'||_{H0}^2 + theta_next - theta_k
/// H0 is taken from m, H0+ from h0_next.
double check_cc3(const CertRecord& cert, const PcMatrices& m, const DenseMatrix& h0_next,
                 const DenseVector& v_k, const DenseVector& v_next, const DenseVector& v_tilde,
                 const DenseVector& v_ref);

/// 1 + |‖v^k - v'‖²_H| + ‖v^k - v~‖². H may be indefinite, hence the
/// absolute value.
double check_scale(const PcMatrices& m, const DenseVector& v_k, const DenseVector& v_tilde,
                   const DenseVector& v_ref);

/// Competitor point for the prediction inequality, with its v and z images.
struct Competitor {
  std::vector<DenseVector> x_blocks;
  DenseVector lambda;
  DenseVector v;
  DenseVector z;
};

struct PredictionInequality {
  double slack = 0.0;  // LHS - RHS
  double scale = 1.0;  // 1 + sum of |terms|
};

/// f(x) - f(x~) + (u - u~)^T F(u~) - (v - v~)^T Q (v^k - v~) - sigma/2 ||z^k - z||_R^2
PredictionInequality prediction_inequality(const BlockProblem& problem, const Prediction& pred,
                                           const DenseVector& v_k, const PcMatrices& m,
                                           const CertRecord& cert, const Competitor& u);

/// Weighted running average of the stacked prediction iterates, with
/// compensated accumulation.
class ErgodicAverage {
 public:
  /// Throws WeightError unless r > 0.
  void add(const std::vector<DenseVector>& x_tilde, double r);
  bool empty() const noexcept { return count_ == 0; }
  std::size_t count() const noexcept { return count_; }
  double weight_sum() const noexcept { return weight_ + weight_comp_; }
  /// Stacked average; throws WeightError when empty.
  DenseVector mean() const;
  std::vector<DenseVector> mean_blocks(const std::vector<std::size_t>& dims) const;

 private:
  std::vector<double> sum_, comp_;
  double weight_ = 0.0, weight_comp_ = 0.0;
  std::size_t count_ = 0;
};

struct GapMetrics {
  double lagrangian_gap = 0.0;
  double feasibility = 0.0;
  double objective_gap = 0.0;
};

GapMetrics gap_metrics(const BlockProblem& problem, const std::vector<DenseVector>& x_eval,
                       const SaddlePoint& saddle);

/// Outcome of the optional per-iteration checks. Absent when not evaluated.
struct CheckOutcome {
  std::optional<double> cc1;           // residual
  std::optional<double> cc1_bound;     // 1e-10 (1 + ||Q||_F)
  std::optional<double> cc2;           // residual
  std::optional<double> cc2_bound;     // 1e-10 (1 + ||G||_F + ||Q||_F)
  std::optional<double> lemma2;        // |difference|
  std::optional<double> cc3_slack;
  std::optional<double> prediction_min_slack;  // worst slack / its scale
  std::optional<bool> g_psd;
  double scale = 1.0;
  bool violated = false;
  std::vector<std::string> violations;
};

struct TraceRecord {
  std::size_t k = 0;
  double beta_k = 0.0;
  double r_k = 0.0;
  IterateState state_before;
  Prediction prediction;
  IterateState state_after;
  std::optional<CertRecord> cert;
  double feasibility = 0.0;     // ||A x~ - b||
  double gap_at_saddle = 0.0;   // pointwise Lagrangian gap at x~
  double iterate_diff_sq = 0.0; // ||x^k - x^{k+1}||^2
  double lagrangian_gap_ergodic = 0.0;
  double feasibility_ergodic = 0.0;
  double min_iterate_diff_sq = 0.0;  // running minimum over all iterations so far
  CheckOutcome checks;
};

struct SolverTrace {
  std::vector<TraceRecord> records;
  ErgodicAverage ergodic;
  DenseVector ergodic_x;
  double ergodic_weight_sum = 0.0;
  std::size_t iterations = 0;
  bool any_violation = false;
};

/// Folds x~ with weight r into the trace's running average and refreshes
/// ergodic_x / ergodic_weight_sum.
void ergodic_update(SolverTrace& trace, const std::vector<DenseVector>& x_tilde, double r_k);

/// Rows: k, beta_k, r_k, lagrangian_gap_ergodic, feasibility_ergodic,
/// gap_pointwise, iterate_diff_sq, cc1_residual, cc3_slack, theta_k.
/// Missing values are written as empty fields.
std::string trace_to_csv(const SolverTrace& trace);
nlohmann::json trace_to_json(const SolverTrace& trace);

/// One parsed CSV row; the columns the rate fitter needs.
struct TraceRow {
  std::size_t k = 0;
  double beta_k = 0.0;
  double r_k = 0.0;
  double lagrangian_gap_ergodic = 0.0;
  double feasibility_ergodic = 0.0;
  double gap_pointwise = 0.0;
  double iterate_diff_sq = 0.0;
  std::optional<double> cc1_residual;
  std::optional<double> cc3_slack;
  std::optional<double> theta_k;
};

std::vector<TraceRow> trace_rows(const SolverTrace& trace);
/// Throws SpecError on malformed input.
std::vector<TraceRow> parse_trace_csv(const std::string& text);

/// Shortest decimal string that parses back to the same double.
std::string format_double(double x);

}  // namespace pcrate::framework
