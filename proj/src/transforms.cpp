#include "volterra/transforms.hpp"

#include <algorithm>
#include <cmath>

#include "volterra/error.hpp"
#include "volterra/parallel.hpp"

namespace volterra {

namespace {

int family_index(TransformKind kind) {
  switch (kind) {
    case TransformKind::T1:
    case TransformKind::B1: return 1;
    case TransformKind::T2:
    case TransformKind::B2: return 2;
    default: throw InvalidArgument("transform kind has no operator family");
  }
}

bool is_bridge(TransformKind kind) { return kind == TransformKind::B1 || kind == TransformKind::B2; }

PathEnsemble like(const PathEnsemble& ens, const std::string& name) {
  PathEnsemble out;
  out.grid = ens.grid;
  out.process_name = name;
  out.seed = ens.seed;
  out.method = ens.method;
  out.paths.resize(ens.paths.rows(), ens.paths.cols());
  return out;
}

void check_shape(const PathEnsemble& ens, const QuadraticVariation& qv) {
  if (static_cast<std::size_t>(ens.paths.cols()) != qv.cells() + 1)
    throw DimensionMismatch("path length does not match the quadratic variation grid");
}

// Rows k(t_i, .) of the context, or indicators for a martingale.
Eigen::MatrixXd kernel_rows(const ProcessContext& ctx) {
  if (ctx.prediction) return ctx.prediction->values;
  const long n = static_cast<long>(ctx.qv.cells());
  Eigen::MatrixXd k = Eigen::MatrixXd::Zero(n + 1, n);
  for (long i = 0; i <= n; ++i) k.row(i).head(i).setOnes();
  return k;
}

Eigen::MatrixXd context_kstar(const ProcessContext& ctx) {
  if (ctx.kstar) return *ctx.kstar;
  if (!ctx.prediction) return kernel_rows(ctx);
  return kstar_from_kappa_inverse(kappa_matrix(*ctx.prediction, ctx.qv).inverse);
}

}  // namespace

ProcessContext martingale_context(const QuadraticVariation& qv) {
  ProcessContext ctx;
  ctx.qv = qv;
  ctx.cov_with_T = Eigen::Map<const Eigen::VectorXd>(qv.cumulative().data(),
                                                     static_cast<long>(qv.cumulative().size()));
  return ctx;
}

ProcessContext volterra_context(const DiscreteKernel& dk) {
  ProcessContext ctx;
  ctx.qv = quadratic_variation(dk);
  ctx.prediction = prediction_kernel(dk);
  const auto w = dk.grid.widths();
  const long n = static_cast<long>(dk.cells());
  ctx.cov_with_T = dk.values * (dk.values.row(n).transpose().cwiseProduct(
                                   Eigen::Map<const Eigen::VectorXd>(w.data(), n)));
  return ctx;
}

PathEnsemble apply_integrands(const PathEnsemble& ens, const Eigen::MatrixXd& g, unsigned threads) {
  const long n = ens.paths.cols() - 1;
  if (g.cols() != n || g.rows() != n + 1) throw DimensionMismatch("integrand matrix shape");
  Eigen::MatrixXd d(n + 1, n);
  for (long j = 1; j <= n; ++j) d.col(j - 1) = j < n ? Eigen::VectorXd(g.col(j - 1) - g.col(j)) : Eigen::VectorXd(g.col(j - 1));
  PathEnsemble out = like(ens, ens.process_name);
  parallel_for(ens.count(), threads, [&](std::size_t begin, std::size_t end) {
    Eigen::VectorXd x(n);
    Eigen::VectorXd y(n + 1);
    for (std::size_t p = begin; p < end; ++p) {
      x = ens.paths.row(static_cast<long>(p)).tail(n).transpose();
      y.noalias() = d * x;
      out.paths.row(static_cast<long>(p)) = y.transpose();
    }
  });
  return out;
}

Eigen::MatrixXd transform_integrands(const ProcessContext& ctx, TransformKind kind, OperatorMode mode) {
  const int i = family_index(kind);
  const OperatorPair m = alpha_beta_m(ctx.qv, i, mode);
  const Eigen::MatrixXd k = kernel_rows(ctx);
  const long n = k.cols();
  Eigen::MatrixXd cols;  // column t holds the M-side image of k(t, .)
  if (is_bridge(kind)) {
    cols = m.alpha.matrix * (eta_matrix(ctx.qv).matrix * k.transpose());
  } else {
    cols = m.beta.matrix * k.transpose();
  }
  if (ctx.prediction) cols = kappa_matrix(*ctx.prediction, ctx.qv).inverse * cols;
  Eigen::MatrixXd g = cols.transpose();
  g.row(0).setZero();
  // eta annihilates the constant 1_{[0,T)}, so the bridge integrand at T vanishes.
  if (is_bridge(kind)) g.row(n).setZero();
  return g;
}

PathEnsemble anticipative_bridge(const PathEnsemble& ens, const Eigen::VectorXd& cov_row, double r_tt) {
  if (!(r_tt > 0.0)) throw DegenerateKernel("anticipative bridge requires R(T,T) > 0");
  const long n = ens.paths.cols() - 1;
  if (cov_row.size() != n + 1) throw DimensionMismatch("covariance row length");
  PathEnsemble out = like(ens, ens.process_name + ":anticipative");
  Eigen::VectorXd c = cov_row / r_tt;
  c(n) = 1.0;
  for (long p = 0; p < ens.paths.rows(); ++p) {
    const double xt = ens.paths(p, n);
    for (long j = 0; j <= n; ++j) out.paths(p, j) = ens.paths(p, j) - c(j) * xt;
  }
  return out;
}

// Both martingale maps integrate M interpolated linearly in <M>-time, so each
// cell contributes through the exact weights of hardy_weights.
PathEnsemble transform_T_martingale(const PathEnsemble& ens, const QuadraticVariation& qv, int i) {
  check_shape(ens, qv);
  if (i != 1 && i != 2) throw InvalidArgument("transform index must be 1 or 2");
  const long n = static_cast<long>(qv.cells());
  const HardyWeights w = hardy_weights(qv);
  PathEnsemble out = like(ens, ens.process_name + (i == 1 ? ":T1" : ":T2"));
  for (long p = 0; p < ens.paths.rows(); ++p) {
    const auto m = ens.paths.row(p);
    double acc = 0.0;
    out.paths(p, 0) = 0.0;
    for (long k = 1; k <= n; ++k) {
      const auto u = static_cast<std::size_t>(k - 1);
      const double dm = m(k) - m(k - 1);
      if (i == 1) {
        // int M_s / <M>_s d<M>_s over the cell
        acc += dm * w.head_self[u];
        if (u > 0) acc += m(k - 1) * w.head_log[u];
      } else {
        // int (M_T - M_s) / <M>_{T,s} d<M>_s over the cell
        acc += dm * w.tail_self[u];
        if (k < n) acc += (m(n) - m(k)) * w.tail_log[u];
      }
      out.paths(p, k) = m(k) - acc;
    }
  }
  return out;
}

PathEnsemble bridge_B_martingale(const PathEnsemble& ens, const QuadraticVariation& qv, int i) {
  check_shape(ens, qv);
  if (i != 1 && i != 2) throw InvalidArgument("bridge index must be 1 or 2");
  const long n = static_cast<long>(qv.cells());
  const HardyWeights w = hardy_weights(qv);
  PathEnsemble out = like(ens, ens.process_name + (i == 1 ? ":B1" : ":B2"));
  for (long p = 0; p < ens.paths.rows(); ++p) {
    const auto m = ens.paths.row(p);
    if (i == 1) {
      // -<M>_t int_t^T dM_s / <M>_s
      double acc = 0.0;
      out.paths(p, n) = 0.0;
      for (long k = n - 1; k >= 1; --k) {
        const auto u = static_cast<std::size_t>(k);
        acc += (m(k + 1) - m(k)) * w.head_log[u] / qv.increment(u);
        out.paths(p, k) = -qv.at_node(u) * acc;
      }
      out.paths(p, 0) = 0.0;
    } else {
      // <M>_{T,t} int_0^t dM_s / <M>_{T,s}
      double acc = 0.0;
      out.paths(p, 0) = 0.0;
      for (long k = 1; k < n; ++k) {
        const auto u = static_cast<std::size_t>(k - 1);
        acc += (m(k) - m(k - 1)) * w.tail_log[u] / qv.increment(u);
        out.paths(p, k) = qv.tail(static_cast<std::size_t>(k)) * acc;
      }
      out.paths(p, n) = 0.0;
    }
  }
  return out;
}

PathEnsemble time_reverse(const PathEnsemble& ens) {
  if (!ens.grid.is_uniform()) throw NonUniformGrid("time reversal needs a uniform grid");
  const long n = ens.paths.cols() - 1;
  PathEnsemble out = like(ens, ens.process_name + ":S");
  for (long p = 0; p < ens.paths.rows(); ++p)
    for (long j = 0; j <= n; ++j) out.paths(p, j) = ens.paths(p, n) - ens.paths(p, n - j);
  return out;
}

TransformKind kind_for(char family, int i) {
  if (family == 'T') return i == 1 ? TransformKind::T1 : TransformKind::T2;
  return i == 1 ? TransformKind::B1 : TransformKind::B2;
}

PathEnsemble prediction_martingale_path(const PathEnsemble& ens, const DiscreteKernel& dk,
                                        PredictionRoute route, const Eigen::MatrixXd* kstar,
                                        unsigned threads) {
  const long n = static_cast<long>(dk.cells());
  if (ens.paths.cols() != n + 1) throw DimensionMismatch("path length does not match kernel grid");
  if (route == PredictionRoute::from_increments) {
    if (!ens.increments) throw MissingIncrements("prediction martingale from increments needs stored dW");
    const auto& dw = *ens.increments;
    PathEnsemble out = like(ens, ens.process_name + ":M");
    for (long p = 0; p < dw.rows(); ++p) {
      double acc = 0.0;
      out.paths(p, 0) = 0.0;
      for (long j = 0; j < n; ++j) {
        acc += dk.values(n, j) * dw(p, j);
        out.paths(p, j + 1) = acc;
      }
    }
    return out;
  }
  Eigen::MatrixXd ks;
  if (kstar) {
    ks = *kstar;
  } else {
    const DiscreteKernel pk = prediction_kernel(dk);
    ks = kstar_from_kappa_inverse(kappa_matrix(pk, quadratic_variation(dk)).inverse);
  }
  PathEnsemble out = apply_integrands(ens, ks, threads);
  out.process_name = ens.process_name + ":M";
  return out;
}

PathEnsemble transform_volterra(const PathEnsemble& ens, const ProcessContext& ctx, TransformKind kind,
                                TransformMethod method, OperatorMode mode, unsigned threads) {
  check_shape(ens, ctx.qv);
  const long n = static_cast<long>(ctx.qv.cells());
  switch (kind) {
    case TransformKind::anticipative:
      return anticipative_bridge(ens, ctx.cov_with_T, ctx.cov_with_T(n));
    case TransformKind::reverse:
      return time_reverse(ens);
    case TransformKind::prediction: {
      if (ctx.is_martingale()) return ens;
      PathEnsemble m = apply_integrands(ens, context_kstar(ctx), threads);
      m.process_name = ens.process_name + ":M";
      return m;
    }
    default:
      break;
  }
  const int i = family_index(kind);
  if (method == TransformMethod::operator_form) {
    PathEnsemble out = apply_integrands(ens, transform_integrands(ctx, kind, mode), threads);
    out.process_name = ens.process_name + (is_bridge(kind) ? ":B" : ":T") + std::to_string(i);
    return out;
  }
  // Pathwise: transform the prediction martingale, then integrate k(t, .)
  // against the transformed martingale.
  PathEnsemble m = ctx.is_martingale() ? ens : apply_integrands(ens, context_kstar(ctx), threads);
  PathEnsemble y = is_bridge(kind) ? bridge_B_martingale(m, ctx.qv, i) : transform_T_martingale(m, ctx.qv, i);
  if (ctx.is_martingale()) return y;
  PathEnsemble out = apply_integrands(y, ctx.prediction->values, threads);
  out.process_name = y.process_name;
  if (is_bridge(kind)) out.paths.col(n).setZero();
  return out;
}

double max_abs_difference(const PathEnsemble& a, const PathEnsemble& b) {
  if (a.paths.rows() != b.paths.rows() || a.paths.cols() != b.paths.cols())
    throw DimensionMismatch("ensembles differ in shape");
  if (a.paths.size() == 0) return 0.0;
  return (a.paths - b.paths).cwiseAbs().maxCoeff();
}

double max_abs_difference_at(const PathEnsemble& a, const PathEnsemble& b,
                             const std::vector<std::size_t>& nodes) {
  if (a.paths.rows() != b.paths.rows() || a.paths.cols() != b.paths.cols())
    throw DimensionMismatch("ensembles differ in shape");
  double m = 0.0;
  for (std::size_t k : nodes) {
    if (static_cast<long>(k) >= a.paths.cols()) throw InvalidArgument("residual node out of range");
    for (long p = 0; p < a.paths.rows(); ++p)
      m = std::max(m, std::abs(a.paths(p, static_cast<long>(k)) - b.paths(p, static_cast<long>(k))));
  }
  return m;
}

std::vector<ResidualRow> roundtrip_residuals(const PathEnsemble& ens, const ProcessContext& ctx, int i,
                                             unsigned threads) {
  const long n = static_cast<long>(ctx.qv.cells());
  const std::vector<std::size_t> sub = standard_subgrid(ctx.qv.grid());
  const TransformKind tk = kind_for('T', i);
  const TransformKind bk = kind_for('B', i);
  const PathEnsemble anti = anticipative_bridge(ens, ctx.cov_with_T, ctx.cov_with_T(n));
  std::vector<ResidualRow> rows;
  const std::string suffix = std::to_string(i);
  const std::string bt_name = "B" + suffix + "(T" + suffix + "(X))=antX";
  const std::string tb_name = "T" + suffix + "(B" + suffix + "(X))=X";
  auto push = [&](const std::string& mode, const PathEnsemble& bt, const PathEnsemble& tb) {
    rows.push_back({bt_name, mode, max_abs_difference_at(bt, anti, sub)});
    rows.push_back({tb_name, mode, max_abs_difference_at(tb, ens, sub)});
    rows.push_back({bt_name, mode + ":all-nodes", max_abs_difference(bt, anti)});
    rows.push_back({tb_name, mode + ":all-nodes", max_abs_difference(tb, ens)});
  };
  for (OperatorMode mode : {OperatorMode::analytic, OperatorMode::consistent}) {
    const Eigen::MatrixXd gt = transform_integrands(ctx, tk, mode);
    const Eigen::MatrixXd gb = transform_integrands(ctx, bk, mode);
    push(mode == OperatorMode::analytic ? "analytic" : "consistent",
         apply_integrands(apply_integrands(ens, gt, threads), gb, threads),
         apply_integrands(apply_integrands(ens, gb, threads), gt, threads));
  }
  if (ctx.is_martingale())
    push("pathwise", bridge_B_martingale(transform_T_martingale(ens, ctx.qv, i), ctx.qv, i),
         transform_T_martingale(bridge_B_martingale(ens, ctx.qv, i), ctx.qv, i));
  return rows;
}

std::vector<ResidualRow> reversal_residuals(const PathEnsemble& ens, const ProcessContext& ctx,
                                            unsigned threads) {
  std::vector<ResidualRow> rows;
  rows.push_back({"S(S(X))=X", "exact", max_abs_difference(time_reverse(time_reverse(ens)), ens)});
  const PathEnsemble m = ctx.is_martingale() ? ens : apply_integrands(ens, context_kstar(ctx), threads);
  const ProcessContext mc = martingale_context(ctx.qv);
  const ProcessContext rc = martingale_context(ctx.qv.reversed());
  const PathEnsemble sm = time_reverse(m);
  ProcessContext xs_ctx;
  PathEnsemble xs;
  if (!ctx.is_martingale()) {
    // X^S integrates k(t, .) against the reversed prediction martingale.
    xs_ctx = rc;
    xs_ctx.prediction = ctx.prediction;
    xs = apply_integrands(sm, ctx.prediction->values, threads);
  }
  auto lift = [&](const PathEnsemble& y) { return apply_integrands(y, ctx.prediction->values, threads); };
  for (OperatorMode mode : {OperatorMode::analytic, OperatorMode::consistent}) {
    const std::string name = mode == OperatorMode::analytic ? "analytic" : "consistent";
    for (char fam : {'T', 'B'}) {
      const PathEnsemble lhs = time_reverse(transform_volterra(m, mc, kind_for(fam, 1),
                                                               TransformMethod::operator_form, mode, threads));
      const PathEnsemble rhs = transform_volterra(sm, rc, kind_for(fam, 2), TransformMethod::operator_form,
                                                  mode, threads);
      const std::string f(1, fam);
      rows.push_back({"S(" + f + "1(M))=" + f + "2(S(M))", name, max_abs_difference(lhs, rhs)});
      if (!ctx.is_martingale()) {
        const PathEnsemble xl = lift(lhs);
        const PathEnsemble xr = transform_volterra(xs, xs_ctx, kind_for(fam, 2), TransformMethod::operator_form,
                                                   mode, threads);
        rows.push_back({"(" + f + "1(X))^S=" + f + "2(X^S)", name, max_abs_difference(xl, xr)});
      }
    }
  }
  for (char fam : {'T', 'B'}) {
    const PathEnsemble lhs = time_reverse(transform_volterra(m, mc, kind_for(fam, 1), TransformMethod::pathwise,
                                                             OperatorMode::analytic, threads));
    const PathEnsemble rhs = transform_volterra(sm, rc, kind_for(fam, 2), TransformMethod::pathwise,
                                                OperatorMode::analytic, threads);
    const std::string f(1, fam);
    rows.push_back({"S(" + f + "1(M))=" + f + "2(S(M))", "pathwise", max_abs_difference(lhs, rhs)});
  }
  return rows;
}

Eigen::MatrixXd increment_covariance(const DiscreteKernel& dk) {
  const long n = static_cast<long>(dk.cells());
  const Eigen::MatrixXd dz = dk.values.bottomRows(n) - dk.values.topRows(n);
  const auto w = dk.grid.widths();
  return dz * Eigen::Map<const Eigen::VectorXd>(w.data(), n).asDiagonal() * dz.transpose();
}

Eigen::MatrixXd increment_covariance(const QuadraticVariation& qv) {
  return Eigen::Map<const Eigen::VectorXd>(qv.increments().data(), static_cast<long>(qv.cells()))
      .asDiagonal();
}

RoundtripSpread roundtrip_spread(const ProcessContext& ctx, const Eigen::MatrixXd& increment_cov, int i,
                                 OperatorMode mode, const std::vector<std::size_t>& nodes) {
  const long n = static_cast<long>(ctx.qv.cells());
  if (increment_cov.rows() != n || increment_cov.cols() != n)
    throw DimensionMismatch("increment covariance does not match the grid");
  // Differences of node values: (d v)_j = v_{j+1} - v_j.
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n, n + 1);
  for (long j = 0; j < n; ++j) {
    d(j, j) = -1.0;
    d(j, j + 1) = 1.0;
  }
  const Eigen::MatrixXd gt = transform_integrands(ctx, kind_for('T', i), mode);
  const Eigen::MatrixXd gb = transform_integrands(ctx, kind_for('B', i), mode);
  const double r_tt = ctx.cov_with_T(n);
  auto spread = [&](const Eigen::MatrixXd& composite, bool bridge) {
    double worst = 0.0;
    for (std::size_t node : nodes) {
      const long a = static_cast<long>(node);
      Eigen::RowVectorXd r = composite.row(a);
      r.head(a).array() -= 1.0;
      if (bridge) r.array() += ctx.cov_with_T(a) / r_tt;
      const double v = (r * increment_cov * r.transpose())(0);
      worst = std::max(worst, std::sqrt(std::max(v, 0.0)));
    }
    return worst;
  };
  RoundtripSpread out;
  out.bridge_of_transform = spread(gb * d * gt, true);
  out.transform_of_bridge = spread(gt * d * gb, false);
  return out;
}

}  // namespace volterra
