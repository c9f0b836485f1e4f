// Copyright 2026 The eqpd Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "eqpd/layers.h"

#include <cmath>
#include <string>
#include <type_traits>
#include <utility>

#include <Eigen/Dense>

#include "eqpd/error.h"

namespace eqpd {
namespace {

using Eigen::Index;
using Eigen::MatrixXcd;
using Eigen::VectorXd;

using StateMap = Eigen::Map<MatrixXcd>;
using ConstStateMap = Eigen::Map<const MatrixXcd>;
using CoeffMatrix =
    Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using CoeffMap = Eigen::Map<const CoeffMatrix>;

// (N K) x M view: column m is vec(D_m).
ConstStateMap Flat(const HiddenState& d) {
  return {d.data(), static_cast<Index>(d.block_size()),
          static_cast<Index>(d.width())};
}
StateMap Flat(HiddenState& d) {
  return {d.data(), static_cast<Index>(d.block_size()),
          static_cast<Index>(d.width())};
}
// Representation m as an N x K column-major matrix.
ConstStateMap Block(const HiddenState& d, std::size_t m) {
  return {d.data() + m * d.block_size(), static_cast<Index>(d.n_antennas()),
          static_cast<Index>(d.n_users())};
}
StateMap Block(HiddenState& d, std::size_t m) {
  return {d.data() + m * d.block_size(), static_cast<Index>(d.n_antennas()),
          static_cast<Index>(d.n_users())};
}
CoeffMap AsEigen(const ComplexMatrix& m) {
  return {m.data(), static_cast<Index>(m.rows()), static_cast<Index>(m.cols())};
}
void AddTo(ComplexMatrix& dst, const MatrixXcd& src) {
  for (std::size_t r = 0; r < dst.rows(); ++r) {
    for (std::size_t c = 0; c < dst.cols(); ++c) dst(r, c) += src(r, c);
  }
}

void CheckCoeff(const ComplexMatrix& m, std::size_t in_width,
                std::size_t out_width, const char* what) {
  if (m.rows() != out_width || m.cols() != in_width) {
    throw Error(ErrorCode::kInvalidDimension,
                std::string("coefficient ") + what + " has shape " +
                    std::to_string(m.rows()) + "x" + std::to_string(m.cols()) +
                    ", expected " + std::to_string(out_width) + "x" +
                    std::to_string(in_width));
  }
}

// Aggregation layer in combined form:
//   out_{nk} = alpha d_nk + beta colsum_k + gamma rowsum_n + delta total
// where colsum_k sums over antennas and rowsum_n over users. Absent terms
// are null.
struct Aggregation {
  const ComplexMatrix* alpha = nullptr;
  const ComplexMatrix* beta = nullptr;
  const ComplexMatrix* gamma = nullptr;
  const ComplexMatrix* delta = nullptr;
  std::size_t out_width = 0;
};

// K x M column sums and N x M row sums of every representation.
MatrixXcd ColumnSums(const HiddenState& d) {
  MatrixXcd out(d.n_users(), d.width());
  for (std::size_t m = 0; m < d.width(); ++m) {
    out.col(m) = Block(d, m).colwise().sum().transpose();
  }
  return out;
}
MatrixXcd RowSums(const HiddenState& d) {
  MatrixXcd out(d.n_antennas(), d.width());
  for (std::size_t m = 0; m < d.width(); ++m) {
    out.col(m) = Block(d, m).rowwise().sum();
  }
  return out;
}

// Adds broadcast terms: out(n, k, m') += per_user(k, m') + per_antenna(n, m')
// + total(m').
void Broadcast(HiddenState& out, const MatrixXcd* per_user,
               const MatrixXcd* per_antenna, const MatrixXcd* total) {
  const std::size_t n_ant = out.n_antennas();
  for (std::size_t mp = 0; mp < out.width(); ++mp) {
    StateMap block = Block(out, mp);
    if (per_user) {
      for (std::size_t k = 0; k < out.n_users(); ++k) {
        block.col(k).array() += (*per_user)(k, mp);
      }
    }
    if (per_antenna) {
      for (std::size_t k = 0; k < out.n_users(); ++k) {
        block.col(k) += per_antenna->col(mp).head(n_ant);
      }
    }
    if (total) block.array() += (*total)(0, mp);
  }
}

HiddenState AggregationForward(const HiddenState& d, const Aggregation& agg) {
  HiddenState out(d.n_antennas(), d.n_users(), agg.out_width);
  Flat(out).noalias() = Flat(d) * AsEigen(*agg.alpha).transpose();
  MatrixXcd per_user, per_antenna, total;
  if (agg.beta || agg.delta) {
    const MatrixXcd cols = ColumnSums(d);
    if (agg.beta) per_user = cols * AsEigen(*agg.beta).transpose();
    if (agg.delta) {
      total = cols.colwise().sum() * AsEigen(*agg.delta).transpose();
    }
  }
  if (agg.gamma) per_antenna = RowSums(d) * AsEigen(*agg.gamma).transpose();
  Broadcast(out, agg.beta ? &per_user : nullptr,
            agg.gamma ? &per_antenna : nullptr, agg.delta ? &total : nullptr);
  return out;
}

// Gradients with respect to alpha..delta, accumulated in the same slots.
struct AggregationGrads {
  MatrixXcd alpha, beta, gamma, delta;
};

HiddenState AggregationBackward(const HiddenState& d, const Aggregation& agg,
                                const HiddenState& grad_out,
                                AggregationGrads& grads) {
  HiddenState grad_in(d.n_antennas(), d.n_users(), d.width());
  const ConstStateMap g = Flat(grad_out);
  const ConstStateMap x = Flat(d);
  StateMap gx = Flat(grad_in);
  gx.noalias() = g * AsEigen(*agg.alpha).conjugate();
  grads.alpha = (x.adjoint() * g).transpose();

  const std::size_t n_ant = d.n_antennas();
  const std::size_t n_users = d.n_users();
  if (agg.beta || agg.delta) {
    const MatrixXcd cols = ColumnSums(d);
    const MatrixXcd g_cols = ColumnSums(grad_out);  // K x M'
    MatrixXcd back_user = MatrixXcd::Zero(n_users, d.width());
    MatrixXcd back_total = MatrixXcd::Zero(1, d.width());
    if (agg.beta) {
      grads.beta = (cols.adjoint() * g_cols).transpose();
      back_user = g_cols * AsEigen(*agg.beta).conjugate();
    }
    if (agg.delta) {
      const MatrixXcd tot = cols.colwise().sum();
      const MatrixXcd g_tot = g_cols.colwise().sum();
      grads.delta = (tot.adjoint() * g_tot).transpose();
      back_total = g_tot * AsEigen(*agg.delta).conjugate();
    }
    for (std::size_t m = 0; m < d.width(); ++m) {
      StateMap block = Block(grad_in, m);
      for (std::size_t k = 0; k < n_users; ++k) {
        block.col(k).array() += back_user(k, m) + back_total(0, m);
      }
    }
  }
  if (agg.gamma) {
    const MatrixXcd rows = RowSums(d);
    const MatrixXcd g_rows = RowSums(grad_out);  // N x M'
    grads.gamma = (rows.adjoint() * g_rows).transpose();
    const MatrixXcd back = g_rows * AsEigen(*agg.gamma).conjugate();
    for (std::size_t m = 0; m < d.width(); ++m) {
      StateMap block = Block(grad_in, m);
      for (std::size_t k = 0; k < n_users; ++k) {
        block.col(k) += back.col(m).head(n_ant);
      }
    }
  }
  return grad_in;
}

void CheckInput(const HiddenState& d, std::size_t in_width) {
  if (d.width() != in_width) {
    throw Error(ErrorCode::kInvalidDimension,
                "input width " + std::to_string(d.width()) +
                    " does not match layer width " + std::to_string(in_width));
  }
}

// Combined coefficients for each aggregation family.
struct Combined {
  ComplexMatrix alpha, beta, gamma, delta;
  Aggregation agg;
};

Combined Combine(const PennParams& p) {
  const std::size_t in = p.b.cols();
  const std::size_t out = p.b.rows();
  CheckCoeff(p.b, in, out, "b");
  CheckCoeff(p.p, in, out, "p");
  CheckCoeff(p.q, in, out, "q");
  CheckCoeff(p.c, in, out, "c");
  Combined c;
  c.alpha = p.b - p.p - p.q + p.c;
  c.beta = p.p - p.c;
  c.gamma = p.q - p.c;
  c.delta = p.c;
  c.agg = {&c.alpha, &c.beta, &c.gamma, &c.delta, out};
  return c;
}

Combined Combine(const EdgeGnnParams& p) {
  const std::size_t in = p.b.cols();
  const std::size_t out = p.b.rows();
  CheckCoeff(p.b, in, out, "b");
  CheckCoeff(p.p, in, out, "p");
  CheckCoeff(p.q, in, out, "q");
  Combined c;
  c.alpha = p.b - p.p - p.q;
  c.beta = p.p;
  c.gamma = p.q;
  c.agg = {&c.alpha, &c.beta, &c.gamma, nullptr, out};
  return c;
}

Combined Combine(const LinearUeParams& p) {
  const std::size_t in = p.b.cols();
  const std::size_t out = p.b.rows();
  CheckCoeff(p.b, in, out, "b");
  CheckCoeff(p.q, in, out, "q");
  Combined c;
  c.alpha = p.b - p.q;
  c.gamma = p.q;
  c.agg = {&c.alpha, nullptr, &c.gamma, nullptr, out};
  return c;
}

// Gram-weighted terms of one representation: Z = D diag(G) and Y = D Goff^T
// (standard) or Y = D Goff (transposed), with G = D^H D and Goff its
// off-diagonal part.
void GramTerms(ConstStateMap dm, GramOrder order, MatrixXcd& gram,
               Eigen::Ref<MatrixXcd> z, Eigen::Ref<MatrixXcd> y) {
  gram.noalias() = dm.adjoint() * dm;
  MatrixXcd off = gram;
  off.diagonal().setZero();
  const Index n_users = dm.cols();
  for (Index k = 0; k < n_users; ++k) {
    z.col(k) = dm.col(k) * gram(k, k).real();
  }
  if (order == GramOrder::kStandard) {
    y.noalias() = dm * off.transpose();
  } else {
    y.noalias() = dm * off;
  }
}

HiddenState UpnnForwardImpl(const HiddenState& d, const UpnnParams& p,
                            GramOrder order, MatrixXcd* z_out, MatrixXcd* y_out) {
  const std::size_t in = p.b.cols();
  const std::size_t out = p.b.rows();
  CheckCoeff(p.b, in, out, "b");
  CheckCoeff(p.q, in, out, "q");
  CheckInput(d, in);
  const Index nk = static_cast<Index>(d.block_size());
  const Index n_ant = static_cast<Index>(d.n_antennas());
  const Index n_users = static_cast<Index>(d.n_users());
  MatrixXcd z(nk, in), y(nk, in), gram(n_users, n_users);
  for (std::size_t m = 0; m < in; ++m) {
    Eigen::Map<MatrixXcd> zm(z.col(m).data(), n_ant, n_users);
    Eigen::Map<MatrixXcd> ym(y.col(m).data(), n_ant, n_users);
    GramTerms(Block(d, m), order, gram, zm, ym);
  }
  HiddenState result(d.n_antennas(), d.n_users(), out);
  Flat(result).noalias() =
      z * AsEigen(p.b).transpose() + y * AsEigen(p.q).transpose();
  if (z_out) *z_out = std::move(z);
  if (y_out) *y_out = std::move(y);
  return result;
}

HiddenState UpnnBackward(const HiddenState& d, const UpnnParams& p, GramOrder order,
                         const HiddenState& grad_out, UpnnParams& grad) {
  MatrixXcd z, y;
  UpnnForwardImpl(d, p, order, &z, &y);
  const ConstStateMap g = Flat(grad_out);
  AddTo(grad.b, (z.adjoint() * g).transpose());
  AddTo(grad.q, (y.adjoint() * g).transpose());
  const MatrixXcd g_z = g * AsEigen(p.b).conjugate();
  const MatrixXcd g_y = g * AsEigen(p.q).conjugate();

  const Index n_ant = static_cast<Index>(d.n_antennas());
  const Index n_users = static_cast<Index>(d.n_users());
  HiddenState grad_in(d.n_antennas(), d.n_users(), d.width());
  MatrixXcd gram(n_users, n_users);
  for (std::size_t m = 0; m < d.width(); ++m) {
    const ConstStateMap dm = Block(d, m);
    StateMap gdm = Block(grad_in, m);
    Eigen::Map<const MatrixXcd> gz(g_z.col(m).data(), n_ant, n_users);
    Eigen::Map<const MatrixXcd> gy(g_y.col(m).data(), n_ant, n_users);
    gram.noalias() = dm.adjoint() * dm;
    MatrixXcd off = gram;
    off.diagonal().setZero();
    MatrixXcd g_gram;
    if (order == GramOrder::kStandard) {
      // Y = D Goff^T: dL/dD += gY conj(Goff), dL/dGoff = (D^H gY)^T.
      gdm.noalias() = gy * off.conjugate();
      g_gram = (dm.adjoint() * gy).transpose();
    } else {
      // Y = D Goff: dL/dD += gY Goff^H, dL/dGoff = D^H gY.
      gdm.noalias() = gy * off.adjoint();
      g_gram = dm.adjoint() * gy;
    }
    g_gram.diagonal().setZero();
    // Z_k = G_kk d_k.
    for (Index k = 0; k < n_users; ++k) {
      gdm.col(k) += gz.col(k) * gram(k, k).real();
      g_gram(k, k) = dm.col(k).dot(gz.col(k));
    }
    // G = D^H D.
    const MatrixXcd sym = g_gram + g_gram.adjoint();
    gdm.noalias() += dm * sym;
  }
  return grad_in;
}

template <typename Params>
HiddenState AggregationLayerBackward(const HiddenState& d, const Params& p,
                                     const HiddenState& grad_out,
                                     Params& grad) {
  const Combined c = Combine(p);
  AggregationGrads g;
  HiddenState grad_in = AggregationBackward(d, c.agg, grad_out, g);
  // Transpose of the (real) linear map from named to combined coefficients.
  AddTo(grad.b, g.alpha);
  if constexpr (std::is_same_v<Params, PennParams>) {
    AddTo(grad.p, g.beta - g.alpha);
    AddTo(grad.q, g.gamma - g.alpha);
    AddTo(grad.c, g.alpha - g.beta - g.gamma + g.delta);
  } else if constexpr (std::is_same_v<Params, EdgeGnnParams>) {
    AddTo(grad.p, g.beta - g.alpha);
    AddTo(grad.q, g.gamma - g.alpha);
  } else {
    AddTo(grad.q, g.gamma - g.alpha);
  }
  return grad_in;
}

// tanh(r) / r and (d/dr)(tanh(r) / r) / r, with series near 0.
void NormTanhFactors(double r, double& f, double& df_over_r) {
  if (r < 1e-4) {
    const double r2 = r * r;
    f = 1.0 - r2 / 3.0 + 2.0 * r2 * r2 / 15.0;
    df_over_r = -2.0 / 3.0 + 8.0 * r2 / 15.0;
    return;
  }
  const double t = std::tanh(r);
  f = t / r;
  df_over_r = ((1.0 - t * t) * r - t) / (r * r * r);
}

}  // namespace

HiddenState::HiddenState(std::size_t n_antennas, std::size_t n_users,
                         std::size_t width)
    : n_antennas_(n_antennas),
      n_users_(n_users),
      width_(width),
      data_(n_antennas * n_users * width) {}

HiddenState HiddenState::FromChannel(const ComplexMatrix& h, double scale) {
  HiddenState out(h.rows(), h.cols(), 1);
  for (std::size_t n = 0; n < h.rows(); ++n) {
    for (std::size_t k = 0; k < h.cols(); ++k) out.at(n, k, 0) = scale * h(n, k);
  }
  return out;
}

ComplexMatrix HiddenState::Representation(std::size_t m) const {
  ComplexMatrix out(n_antennas_, n_users_);
  for (std::size_t n = 0; n < n_antennas_; ++n) {
    for (std::size_t k = 0; k < n_users_; ++k) out(n, k) = at(n, k, m);
  }
  return out;
}

std::string_view LayerKindName(LayerKind kind) {
  switch (kind) {
    case LayerKind::kPenn: return "penn";
    case LayerKind::kEdgeGnn: return "edge-gnn";
    case LayerKind::kLinearUe: return "linear-ue";
    case LayerKind::kUpnn: return "upnn";
  }
  return "?";
}

LayerKind ParseLayerKind(std::string_view name) {
  if (name == "penn") return LayerKind::kPenn;
  if (name == "edge-gnn") return LayerKind::kEdgeGnn;
  if (name == "linear-ue") return LayerKind::kLinearUe;
  if (name == "upnn") return LayerKind::kUpnn;
  throw Error(ErrorCode::kConfiguration,
              "unknown layer kind '" + std::string(name) + "'");
}

std::string_view ActivationName(ActivationKind kind) {
  switch (kind) {
    case ActivationKind::kSplitLeakyRelu: return "split-leaky-relu";
    case ActivationKind::kNormTanh: return "norm-tanh";
    case ActivationKind::kIdentity: return "identity";
  }
  return "?";
}

std::string_view GramOrderName(GramOrder order) {
  return order == GramOrder::kStandard ? "standard" : "transposed";
}

GramOrder ParseGramOrder(std::string_view name) {
  if (name == "standard") return GramOrder::kStandard;
  if (name == "transposed") return GramOrder::kTransposed;
  throw Error(ErrorCode::kConfiguration,
              "unknown gram order '" + std::string(name) + "'");
}

ActivationKind ParseActivation(std::string_view name) {
  if (name == "split-leaky-relu") return ActivationKind::kSplitLeakyRelu;
  if (name == "norm-tanh") return ActivationKind::kNormTanh;
  if (name == "identity") return ActivationKind::kIdentity;
  throw Error(ErrorCode::kConfiguration,
              "unknown activation '" + std::string(name) + "'");
}

LayerKind KindOf(const LayerParams& params) {
  return static_cast<LayerKind>(params.index());
}

LayerParams ZeroParams(LayerKind kind, std::size_t in_width,
                       std::size_t out_width) {
  const ComplexMatrix z(out_width, in_width);
  switch (kind) {
    case LayerKind::kPenn: return PennParams{z, z, z, z};
    case LayerKind::kEdgeGnn: return EdgeGnnParams{z, z, z};
    case LayerKind::kLinearUe: return LinearUeParams{z, z};
    case LayerKind::kUpnn: return UpnnParams{z, z};
  }
  throw Error(ErrorCode::kInvalidArgument, "unknown layer kind");
}

std::vector<ComplexMatrix*> Coefficients(LayerParams& params) {
  return std::visit(
      [](auto& p) -> std::vector<ComplexMatrix*> {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, PennParams>) {
          return {&p.b, &p.p, &p.q, &p.c};
        } else if constexpr (std::is_same_v<T, EdgeGnnParams>) {
          return {&p.b, &p.p, &p.q};
        } else {
          return {&p.b, &p.q};
        }
      },
      params);
}

std::vector<const ComplexMatrix*> Coefficients(const LayerParams& params) {
  auto mutable_view = Coefficients(const_cast<LayerParams&>(params));
  return {mutable_view.begin(), mutable_view.end()};
}

std::size_t InWidth(const LayerParams& params) {
  return std::visit([](const auto& p) { return p.b.cols(); }, params);
}

std::size_t OutWidth(const LayerParams& params) {
  return std::visit([](const auto& p) { return p.b.rows(); }, params);
}

HiddenState PennForward(const HiddenState& d, const PennParams& params) {
  const Combined c = Combine(params);
  CheckInput(d, params.b.cols());
  return AggregationForward(d, c.agg);
}

HiddenState EdgeGnnForward(const HiddenState& d, const EdgeGnnParams& params) {
  const Combined c = Combine(params);
  CheckInput(d, params.b.cols());
  return AggregationForward(d, c.agg);
}

HiddenState LinearUeForward(const HiddenState& d, const LinearUeParams& params) {
  const Combined c = Combine(params);
  CheckInput(d, params.b.cols());
  return AggregationForward(d, c.agg);
}

HiddenState UpnnForward(const HiddenState& d, const UpnnParams& params,
                        GramOrder order) {
  return UpnnForwardImpl(d, params, order, nullptr, nullptr);
}

HiddenState LayerForward(const HiddenState& d, const LayerParams& params,
                         GramOrder order) {
  return std::visit(
      [&d, order](const auto& p) -> HiddenState {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, PennParams>) {
          return PennForward(d, p);
        } else if constexpr (std::is_same_v<T, EdgeGnnParams>) {
          return EdgeGnnForward(d, p);
        } else if constexpr (std::is_same_v<T, LinearUeParams>) {
          return LinearUeForward(d, p);
        } else {
          return UpnnForward(d, p, order);
        }
      },
      params);
}

HiddenState LayerBackward(const HiddenState& d, const LayerParams& params,
                          const HiddenState& grad_out, LayerParams& grad_params,
                          GramOrder order) {
  if (params.index() != grad_params.index()) {
    throw Error(ErrorCode::kInvalidArgument, "gradient kind differs from layer");
  }
  return std::visit(
      [&](const auto& p) -> HiddenState {
        using T = std::decay_t<decltype(p)>;
        T& g = std::get<T>(grad_params);
        if constexpr (std::is_same_v<T, UpnnParams>) {
          return UpnnBackward(d, p, order, grad_out, g);
        } else {
          return AggregationLayerBackward(d, p, grad_out, g);
        }
      },
      params);
}

HiddenState Activate(const HiddenState& d, ActivationKind kind) {
  HiddenState out = d;
  switch (kind) {
    case ActivationKind::kIdentity:
      break;
    case ActivationKind::kSplitLeakyRelu:
      for (Complex& e : out.values()) {
        const double re = e.real() >= 0.0 ? e.real() : kLeakySlope * e.real();
        const double im = e.imag() >= 0.0 ? e.imag() : kLeakySlope * e.imag();
        e = {re, im};
      }
      break;
    case ActivationKind::kNormTanh: {
      const std::size_t n_ant = d.n_antennas();
      const std::size_t columns = d.n_users() * d.width();
      for (std::size_t col = 0; col < columns; ++col) {
        Complex* v = out.data() + col * n_ant;
        double sq = 0.0;
        for (std::size_t n = 0; n < n_ant; ++n) sq += std::norm(v[n]);
        double f, unused;
        NormTanhFactors(std::sqrt(sq), f, unused);
        for (std::size_t n = 0; n < n_ant; ++n) v[n] *= f;
      }
      break;
    }
  }
  return out;
}

HiddenState ActivateBackward(const HiddenState& pre, ActivationKind kind,
                             const HiddenState& grad_out) {
  if (!pre.SameShape(grad_out)) {
    throw Error(ErrorCode::kInvalidDimension, "activation gradient shape");
  }
  HiddenState grad = grad_out;
  switch (kind) {
    case ActivationKind::kIdentity:
      break;
    case ActivationKind::kSplitLeakyRelu: {
      auto in = pre.values();
      auto g = grad.values();
      for (std::size_t i = 0; i < g.size(); ++i) {
        // The kink at 0 takes the positive-side slope.
        const double sr = in[i].real() >= 0.0 ? 1.0 : kLeakySlope;
        const double si = in[i].imag() >= 0.0 ? 1.0 : kLeakySlope;
        g[i] = {sr * g[i].real(), si * g[i].imag()};
      }
      break;
    }
    case ActivationKind::kNormTanh: {
      const std::size_t n_ant = pre.n_antennas();
      const std::size_t columns = pre.n_users() * pre.width();
      for (std::size_t col = 0; col < columns; ++col) {
        const Complex* d = pre.data() + col * n_ant;
        Complex* g = grad.data() + col * n_ant;
        double sq = 0.0;
        double inner = 0.0;  // Re<d, g>
        for (std::size_t n = 0; n < n_ant; ++n) {
          sq += std::norm(d[n]);
          inner += (std::conj(d[n]) * g[n]).real();
        }
        double f, df_over_r;
        NormTanhFactors(std::sqrt(sq), f, df_over_r);
        for (std::size_t n = 0; n < n_ant; ++n) {
          g[n] = f * g[n] + df_over_r * inner * d[n];
        }
      }
      break;
    }
  }
  return grad;
}

}  // namespace eqpd
