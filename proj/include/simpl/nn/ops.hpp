// Copyright 2026 The SIMPL Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SIMPL__NN__OPS_HPP_
#define SIMPL__NN__OPS_HPP_

#include "simpl/common/exception.hpp"
#include "simpl/nn/tape.hpp"
#include "simpl/nn/tensor.hpp"

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace simpl::nn
{
namespace detail
{
template <typename T>
using RowMat = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
template <typename T>
using MapMat = Eigen::Map<RowMat<T>>;
template <typename T>
using ConstMapMat = Eigen::Map<const RowMat<T>>;

inline void check_same_shape(const Shape & a, const Shape & b, const char * op)
{
  expect(a == b, std::string(op) + ": shape mismatch " + shape_str(a) + " vs " + shape_str(b));
}

template <typename T>
void add_into(Tensor<T> & dst, const Tensor<T> & src)
{
  for (std::size_t i = 0; i < dst.size(); ++i) {
    dst[i] += src[i];
  }
}
}  // namespace detail

/**
 * @brief y = x W^T + b over the trailing axis of x. `W` is [out, in], `b` is [out].
 */
template <typename T>
Var<T> linear(const Var<T> & x, const Var<T> & W, const std::optional<Var<T>> & b = std::nullopt)
{
  Tape<T> & tape = *x.tape();
  const auto & xs = x.shape();
  const auto & ws = W.shape();
  expect(ws.size() == 2, "linear: weight must be 2-D");
  expect(
    !xs.empty() && xs.back() == ws[1],
    "linear: input " + shape_str(xs) + " incompatible with weight " + shape_str(ws));
  const std::size_t in = ws[1];
  const std::size_t out = ws[0];
  const std::size_t rows = x.value().size() / in;
  if (b) {
    expect(b->shape() == Shape{out}, "linear: bias shape mismatch");
  }

  Shape ys = xs;
  ys.back() = out;
  Tensor<T> y(ys);
  {
    detail::ConstMapMat<T> X(x.value().data(), rows, in);
    detail::ConstMapMat<T> Wm(W.value().data(), out, in);
    detail::MapMat<T> Y(y.data(), rows, out);
    Y.noalias() = X * Wm.transpose();
    if (b) {
      Eigen::Map<const Eigen::Matrix<T, 1, Eigen::Dynamic>> bv(b->value().data(), out);
      Y.rowwise() += bv;
    }
  }

  const std::size_t xid = x.id();
  const std::size_t wid = W.id();
  const std::optional<std::size_t> bid = b ? std::optional<std::size_t>(b->id()) : std::nullopt;
  std::vector<Var<T>> parents{x, W};
  if (b) {
    parents.push_back(*b);
  }
  return tape.emit(
    std::move(y), parents, [xid, wid, bid, rows, in, out](Tape<T> & t, const Tensor<T> & gy) {
      detail::ConstMapMat<T> dY(gy.data(), rows, out);
      if (t.needs_grad(xid)) {
        detail::ConstMapMat<T> Wm(t.value(wid).data(), out, in);
        detail::MapMat<T> dX(t.grad(xid).data(), rows, in);
        dX.noalias() += dY * Wm;
      }
      if (t.needs_grad(wid)) {
        detail::ConstMapMat<T> X(t.value(xid).data(), rows, in);
        detail::MapMat<T> dW(t.grad(wid).data(), out, in);
        dW.noalias() += dY.transpose() * X;
      }
      if (bid && t.needs_grad(*bid)) {
        Eigen::Map<Eigen::Matrix<T, 1, Eigen::Dynamic>> db(t.grad(*bid).data(), out);
        db += dY.colwise().sum();
      }
    });
}

template <typename T>
Var<T> add(const Var<T> & a, const Var<T> & b)
{
  detail::check_same_shape(a.shape(), b.shape(), "add");
  Tensor<T> y = a.value();
  detail::add_into(y, b.value());
  const std::size_t aid = a.id();
  const std::size_t bid = b.id();
  return a.tape()->emit(std::move(y), {a, b}, [aid, bid](Tape<T> & t, const Tensor<T> & gy) {
    if (t.needs_grad(aid)) {
      detail::add_into(t.grad(aid), gy);
    }
    if (t.needs_grad(bid)) {
      detail::add_into(t.grad(bid), gy);
    }
  });
}

template <typename T>
Var<T> scale(const Var<T> & a, T factor)
{
  Tensor<T> y = a.value();
  for (auto & v : y.values()) {
    v *= factor;
  }
  const std::size_t aid = a.id();
  return a.tape()->emit(std::move(y), {a}, [aid, factor](Tape<T> & t, const Tensor<T> & gy) {
    auto & ga = t.grad(aid);
    for (std::size_t i = 0; i < ga.size(); ++i) {
      ga[i] += factor * gy[i];
    }
  });
}

template <typename T>
Var<T> relu(const Var<T> & x)
{
  Tensor<T> y = x.value();
  for (auto & v : y.values()) {
    v = v < T(0) ? T(0) : v;  // NaN passes through
  }
  const std::size_t xid = x.id();
  const std::size_t yid = x.tape()->size();
  return x.tape()->emit(std::move(y), {x}, [xid, yid](Tape<T> & t, const Tensor<T> & gy) {
    const auto & yv = t.value(yid);
    auto & gx = t.grad(xid);
    for (std::size_t i = 0; i < gx.size(); ++i) {
      if (yv[i] > T(0)) {
        gx[i] += gy[i];
      }
    }
  });
}

/**
 * @brief Layer normalization over the trailing axis, eps = 1e-5.
 */
template <typename T>
Var<T> layer_norm(const Var<T> & x, const Var<T> & gain, const Var<T> & bias, T eps = T(1e-5))
{
  const std::size_t d = x.shape().back();
  expect(gain.shape() == Shape{d} && bias.shape() == Shape{d}, "layer_norm: parameter shape");
  const std::size_t rows = x.value().size() / d;
  Tensor<T> y(x.shape());
  Tensor<T> xhat(x.shape());
  std::vector<T> inv_std(rows);
  const T * xv = x.value().data();
  const T * g = gain.value().data();
  const T * bb = bias.value().data();
  for (std::size_t r = 0; r < rows; ++r) {
    const T * row = xv + r * d;
    T mean = 0;
    for (std::size_t k = 0; k < d; ++k) {
      mean += row[k];
    }
    mean /= static_cast<T>(d);
    T var = 0;
    for (std::size_t k = 0; k < d; ++k) {
      var += (row[k] - mean) * (row[k] - mean);
    }
    var /= static_cast<T>(d);
    const T is = T(1) / std::sqrt(var + eps);
    inv_std[r] = is;
    for (std::size_t k = 0; k < d; ++k) {
      const T h = (row[k] - mean) * is;
      xhat[r * d + k] = h;
      y[r * d + k] = h * g[k] + bb[k];
    }
  }
  const std::size_t xid = x.id();
  const std::size_t gid = gain.id();
  const std::size_t bid = bias.id();
  return x.tape()->emit(
    std::move(y), {x, gain, bias},
    [xid, gid, bid, d, rows, xhat = std::move(xhat), inv_std = std::move(inv_std)](
      Tape<T> & t, const Tensor<T> & gy) {
      if (t.needs_grad(gid) || t.needs_grad(bid)) {
        auto & gg = t.grad(gid);
        auto & gb = t.grad(bid);
        for (std::size_t r = 0; r < rows; ++r) {
          for (std::size_t k = 0; k < d; ++k) {
            gg[k] += gy[r * d + k] * xhat[r * d + k];
            gb[k] += gy[r * d + k];
          }
        }
      }
      if (t.needs_grad(xid)) {
        const T * g = t.value(gid).data();
        auto & gx = t.grad(xid);
        std::vector<T> dh(d);
        for (std::size_t r = 0; r < rows; ++r) {
          T mean_dh = 0;
          T mean_dh_h = 0;
          for (std::size_t k = 0; k < d; ++k) {
            dh[k] = gy[r * d + k] * g[k];
            mean_dh += dh[k];
            mean_dh_h += dh[k] * xhat[r * d + k];
          }
          mean_dh /= static_cast<T>(d);
          mean_dh_h /= static_cast<T>(d);
          for (std::size_t k = 0; k < d; ++k) {
            gx[r * d + k] += inv_std[r] * (dh[k] - mean_dh - xhat[r * d + k] * mean_dh_h);
          }
        }
      }
    });
}

/**
 * @brief Temporal cross-correlation over x [B, H, C_in] with kernel size 3, zero padding 1.
 * `W` is [C_out, C_in, 3], `b` is [C_out]. Output is [B, (H - 1) / stride + 1, C_out].
 */
template <typename T>
Var<T> conv1d(const Var<T> & x, const Var<T> & W, const Var<T> & b, std::size_t stride)
{
  const auto & xs = x.shape();
  const auto & ws = W.shape();
  expect(xs.size() == 3, "conv1d: input must be [B, H, C]");
  expect(ws.size() == 3 && ws[2] == 3 && ws[1] == xs[2], "conv1d: weight shape mismatch");
  expect(stride == 1 || stride == 2, "conv1d: stride must be 1 or 2");
  const std::size_t batch = xs[0];
  const std::size_t h = xs[1];
  const std::size_t cin = xs[2];
  const std::size_t cout = ws[0];
  const std::size_t hout = (h - 1) / stride + 1;
  const std::size_t kcols = cin * 3;
  const std::size_t rows = batch * hout;

  Tensor<T> cols({rows, kcols});
  const T * xv = x.value().data();
  for (std::size_t bi = 0; bi < batch; ++bi) {
    for (std::size_t o = 0; o < hout; ++o) {
      T * crow = cols.data() + (bi * hout + o) * kcols;
      for (std::size_t k = 0; k < 3; ++k) {
        const long src = static_cast<long>(o * stride + k) - 1;
        if (src < 0 || src >= static_cast<long>(h)) {
          continue;
        }
        const T * xin = xv + (bi * h + static_cast<std::size_t>(src)) * cin;
        for (std::size_t c = 0; c < cin; ++c) {
          crow[c * 3 + k] = xin[c];
        }
      }
    }
  }
  Tensor<T> y({batch, hout, cout});
  {
    detail::ConstMapMat<T> C(cols.data(), rows, kcols);
    detail::ConstMapMat<T> Wm(W.value().data(), cout, kcols);
    detail::MapMat<T> Y(y.data(), rows, cout);
    Y.noalias() = C * Wm.transpose();
    Eigen::Map<const Eigen::Matrix<T, 1, Eigen::Dynamic>> bv(b.value().data(), cout);
    Y.rowwise() += bv;
  }
  const std::size_t xid = x.id();
  const std::size_t wid = W.id();
  const std::size_t bid = b.id();
  return x.tape()->emit(
    std::move(y), {x, W, b},
    [=, cols = std::move(cols)](Tape<T> & t, const Tensor<T> & gy) {
      detail::ConstMapMat<T> dY(gy.data(), rows, cout);
      if (t.needs_grad(wid)) {
        detail::ConstMapMat<T> C(cols.data(), rows, kcols);
        detail::MapMat<T> dW(t.grad(wid).data(), cout, kcols);
        dW.noalias() += dY.transpose() * C;
      }
      if (t.needs_grad(bid)) {
        Eigen::Map<Eigen::Matrix<T, 1, Eigen::Dynamic>> db(t.grad(bid).data(), cout);
        db += dY.colwise().sum();
      }
      if (t.needs_grad(xid)) {
        detail::ConstMapMat<T> Wm(t.value(wid).data(), cout, kcols);
        detail::RowMat<T> dC = dY * Wm;
        T * gx = t.grad(xid).data();
        for (std::size_t bi = 0; bi < batch; ++bi) {
          for (std::size_t o = 0; o < hout; ++o) {
            const std::size_t r = bi * hout + o;
            for (std::size_t k = 0; k < 3; ++k) {
              const long src = static_cast<long>(o * stride + k) - 1;
              if (src < 0 || src >= static_cast<long>(h)) {
                continue;
              }
              T * gin = gx + (bi * h + static_cast<std::size_t>(src)) * cin;
              for (std::size_t c = 0; c < cin; ++c) {
                gin[c] += dC(r, c * 3 + k);
              }
            }
          }
        }
      }
    });
}

/**
 * @brief Average over axis 1 of x [B, H, C] -> [B, C].
 */
template <typename T>
Var<T> mean_pool(const Var<T> & x)
{
  const auto & xs = x.shape();
  expect(xs.size() == 3 && xs[1] > 0, "mean_pool: input must be [B, H, C]");
  const std::size_t batch = xs[0];
  const std::size_t h = xs[1];
  const std::size_t c = xs[2];
  Tensor<T> y({batch, c});
  const T inv = T(1) / static_cast<T>(h);
  for (std::size_t bi = 0; bi < batch; ++bi) {
    for (std::size_t s = 0; s < h; ++s) {
      for (std::size_t k = 0; k < c; ++k) {
        y[bi * c + k] += x.value()[(bi * h + s) * c + k] * inv;
      }
    }
  }
  const std::size_t xid = x.id();
  return x.tape()->emit(std::move(y), {x}, [=](Tape<T> & t, const Tensor<T> & gy) {
    auto & gx = t.grad(xid);
    for (std::size_t bi = 0; bi < batch; ++bi) {
      for (std::size_t s = 0; s < h; ++s) {
        for (std::size_t k = 0; k < c; ++k) {
          gx[(bi * h + s) * c + k] += gy[bi * c + k] * inv;
        }
      }
    }
  });
}

/**
 * @brief Max over contiguous row segments of x [P, C]. Segment s covers rows
 * [offsets[s], offsets[s + 1]). Ties route the gradient to the first maximal row.
 */
template <typename T>
Var<T> segment_max(const Var<T> & x, const std::vector<std::size_t> & offsets)
{
  const auto & xs = x.shape();
  expect(xs.size() == 2, "segment_max: input must be [P, C]");
  expect(offsets.size() >= 2 && offsets.back() == xs[0], "segment_max: offsets mismatch");
  const std::size_t segs = offsets.size() - 1;
  const std::size_t c = xs[1];
  Tensor<T> y({segs, c});
  std::vector<std::size_t> arg(segs * c);
  for (std::size_t s = 0; s < segs; ++s) {
    expect(offsets[s + 1] > offsets[s], "segment_max: empty segment");
    for (std::size_t k = 0; k < c; ++k) {
      std::size_t best = offsets[s];
      for (std::size_t r = offsets[s] + 1; r < offsets[s + 1]; ++r) {
        if (x.value()[r * c + k] > x.value()[best * c + k]) {
          best = r;
        }
      }
      arg[s * c + k] = best;
      y[s * c + k] = x.value()[best * c + k];
    }
  }
  const std::size_t xid = x.id();
  return x.tape()->emit(
    std::move(y), {x}, [xid, c, arg = std::move(arg)](Tape<T> & t, const Tensor<T> & gy) {
      auto & gx = t.grad(xid);
      for (std::size_t i = 0; i < arg.size(); ++i) {
        gx[arg[i] * c + i % c] += gy[i];
      }
    });
}

/**
 * @brief Concatenate along axis 0; trailing extents must agree.
 */
template <typename T>
Var<T> concat_rows(const std::vector<Var<T>> & parts)
{
  expect(!parts.empty(), "concat_rows: no inputs");
  Shape tail(parts[0].shape().begin() + 1, parts[0].shape().end());
  std::size_t rows = 0;
  std::vector<T> values;
  std::vector<std::size_t> ids;
  std::vector<std::size_t> starts;
  for (const auto & p : parts) {
    Shape pt(p.shape().begin() + 1, p.shape().end());
    expect(pt == tail, "concat_rows: trailing shape mismatch");
    rows += p.shape()[0];
    starts.push_back(values.size());
    values.insert(values.end(), p.value().storage().begin(), p.value().storage().end());
    ids.push_back(p.id());
  }
  Shape ys{rows};
  ys.insert(ys.end(), tail.begin(), tail.end());
  return parts[0].tape()->emit(
    Tensor<T>(ys, std::move(values)), parts,
    [ids = std::move(ids), starts = std::move(starts)](Tape<T> & t, const Tensor<T> & gy) {
      for (std::size_t p = 0; p < ids.size(); ++p) {
        if (!t.needs_grad(ids[p])) {
          continue;
        }
        auto & g = t.grad(ids[p]);
        for (std::size_t i = 0; i < g.size(); ++i) {
          g[i] += gy[starts[p] + i];
        }
      }
    });
}

/**
 * @brief Rows [begin, end) of x along axis 0.
 */
template <typename T>
Var<T> slice_rows(const Var<T> & x, std::size_t begin, std::size_t end)
{
  const auto & xs = x.shape();
  expect(!xs.empty() && begin <= end && end <= xs[0], "slice_rows: range out of bounds");
  const std::size_t inner = xs[0] ? x.value().size() / xs[0] : 0;
  Shape ys = xs;
  ys[0] = end - begin;
  std::vector<T> values(
    x.value().storage().begin() + static_cast<long>(begin * inner),
    x.value().storage().begin() + static_cast<long>(end * inner));
  const std::size_t xid = x.id();
  return x.tape()->emit(
    Tensor<T>(ys, std::move(values)), {x}, [xid, begin, inner](Tape<T> & t, const Tensor<T> & gy) {
      auto & gx = t.grad(xid);
      for (std::size_t i = 0; i < gy.size(); ++i) {
        gx[begin * inner + i] += gy[i];
      }
    });
}

/**
 * @brief Rows of x selected by `rows` (repeats allowed) along axis 0.
 */
template <typename T>
Var<T> gather_rows(const Var<T> & x, const std::vector<std::size_t> & rows)
{
  const auto & xs = x.shape();
  expect(!xs.empty(), "gather_rows: scalar input");
  const std::size_t inner = xs[0] ? x.value().size() / xs[0] : 0;
  Shape ys = xs;
  ys[0] = rows.size();
  std::vector<T> values(rows.size() * inner);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    expect(rows[r] < xs[0], "gather_rows: row index out of range");
    std::copy_n(x.value().data() + rows[r] * inner, inner, values.data() + r * inner);
  }
  const std::size_t xid = x.id();
  return x.tape()->emit(
    Tensor<T>(ys, std::move(values)), {x}, [xid, rows, inner](Tape<T> & t, const Tensor<T> & gy) {
      auto & gx = t.grad(xid);
      for (std::size_t r = 0; r < rows.size(); ++r) {
        for (std::size_t i = 0; i < inner; ++i) {
          gx[rows[r] * inner + i] += gy[r * inner + i];
        }
      }
    });
}

/**
 * @brief Pairwise broadcast: out[j, i, :] = rel[j, i, :] + src[i, :] + tgt[j, :].
 *
 * With src = F W_s^T, tgt = F W_t^T and rel = R W_r^T + b this equals a linear layer applied
 * to the concatenation (f_i, f_j, r_{i->j}) for every pair, at O(N D^2 + N^2 D) cost.
 */
template <typename T>
Var<T> pair_broadcast_add(const Var<T> & src, const Var<T> & tgt, const Var<T> & rel)
{
  const auto & rs = rel.shape();
  expect(rs.size() == 3 && rs[0] == rs[1], "pair_broadcast_add: rel must be [N, N, D]");
  const std::size_t n = rs[0];
  const std::size_t d = rs[2];
  expect(src.shape() == Shape({n, d}) && tgt.shape() == Shape({n, d}), "pair_broadcast_add: shape");
  Tensor<T> y = rel.value();
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < n; ++i) {
      T * row = y.data() + (j * n + i) * d;
      const T * a = src.value().data() + i * d;
      const T * b = tgt.value().data() + j * d;
      for (std::size_t k = 0; k < d; ++k) {
        row[k] += a[k] + b[k];
      }
    }
  }
  const std::size_t sid = src.id();
  const std::size_t tid = tgt.id();
  const std::size_t rid = rel.id();
  return rel.tape()->emit(std::move(y), {src, tgt, rel}, [=](Tape<T> & t, const Tensor<T> & gy) {
    if (t.needs_grad(rid)) {
      detail::add_into(t.grad(rid), gy);
    }
    const bool gs = t.needs_grad(sid);
    const bool gt = t.needs_grad(tid);
    if (!gs && !gt) {
      return;
    }
    T * ds = gs ? t.grad(sid).data() : nullptr;
    T * dt = gt ? t.grad(tid).data() : nullptr;
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t i = 0; i < n; ++i) {
        const T * row = gy.data() + (j * n + i) * d;
        for (std::size_t k = 0; k < d; ++k) {
          if (ds) ds[i * d + k] += row[k];
          if (dt) dt[j * d + k] += row[k];
        }
      }
    }
  });
}

/**
 * @brief Scaled dot-product attention where every query row attends over its own key set.
 *
 * q is [M, D], k and v are [M, S, D]; heads split D evenly. Returns the concatenated head
 * outputs [M, D] (no projections; see `MultiHeadAttention`).
 */
template <typename T>
Var<T> attention(const Var<T> & q, const Var<T> & k, const Var<T> & v, std::size_t heads)
{
  const auto & qs = q.shape();
  const auto & ks = k.shape();
  expect(qs.size() == 2 && ks.size() == 3, "attention: q must be [M, D], k/v [M, S, D]");
  expect(ks == v.shape() && ks[0] == qs[0] && ks[2] == qs[1], "attention: shape mismatch");
  const std::size_t m = qs[0];
  const std::size_t s = ks[1];
  const std::size_t d = qs[1];
  if (heads == 0 || d % heads != 0) {
    throw SimplException(
      SimplError_t::InvalidInput, "attention: embedding " + std::to_string(d) +
                                    " not divisible by heads " + std::to_string(heads));
  }
  const std::size_t dh = d / heads;
  const T sc = T(1) / std::sqrt(static_cast<T>(dh));
  Tensor<T> y({m, d});
  Tensor<T> probs({m, heads, s});
  const T * qv = q.value().data();
  const T * kv = k.value().data();
  const T * vv = v.value().data();
  std::vector<T> logits(s);
  for (std::size_t r = 0; r < m; ++r) {
    for (std::size_t h = 0; h < heads; ++h) {
      const T * qh = qv + r * d + h * dh;
      T mx = -std::numeric_limits<T>::infinity();
      for (std::size_t j = 0; j < s; ++j) {
        const T * kh = kv + (r * s + j) * d + h * dh;
        T acc = 0;
        for (std::size_t e = 0; e < dh; ++e) {
          acc += qh[e] * kh[e];
        }
        logits[j] = acc * sc;
        mx = std::max(mx, logits[j]);
      }
      T z = 0;
      for (std::size_t j = 0; j < s; ++j) {
        logits[j] = std::exp(logits[j] - mx);
        z += logits[j];
      }
      T * p = probs.data() + (r * heads + h) * s;
      T * out = y.data() + r * d + h * dh;
      for (std::size_t j = 0; j < s; ++j) {
        p[j] = logits[j] / z;
        const T * vh = vv + (r * s + j) * d + h * dh;
        for (std::size_t e = 0; e < dh; ++e) {
          out[e] += p[j] * vh[e];
        }
      }
    }
  }
  const std::size_t qid = q.id();
  const std::size_t kid = k.id();
  const std::size_t vid = v.id();
  return q.tape()->emit(
    std::move(y), {q, k, v},
    [=, probs = std::move(probs)](Tape<T> & t, const Tensor<T> & gy) {
      const T * qv = t.value(qid).data();
      const T * kv = t.value(kid).data();
      const T * vv = t.value(vid).data();
      T * dq = t.needs_grad(qid) ? t.grad(qid).data() : nullptr;
      T * dk = t.needs_grad(kid) ? t.grad(kid).data() : nullptr;
      T * dv = t.needs_grad(vid) ? t.grad(vid).data() : nullptr;
      std::vector<T> dp(s);
      for (std::size_t r = 0; r < m; ++r) {
        for (std::size_t h = 0; h < heads; ++h) {
          const T * p = probs.data() + (r * heads + h) * s;
          const T * go = gy.data() + r * d + h * dh;
          T dot_pdp = 0;
          for (std::size_t j = 0; j < s; ++j) {
            const T * vh = vv + (r * s + j) * d + h * dh;
            T acc = 0;
            for (std::size_t e = 0; e < dh; ++e) {
              acc += go[e] * vh[e];
            }
            dp[j] = acc;
            dot_pdp += p[j] * acc;
            if (dv) {
              T * dvh = dv + (r * s + j) * d + h * dh;
              for (std::size_t e = 0; e < dh; ++e) {
                dvh[e] += p[j] * go[e];
              }
            }
          }
          const T * qh = qv + r * d + h * dh;
          for (std::size_t j = 0; j < s; ++j) {
            const T ds = p[j] * (dp[j] - dot_pdp) * sc;
            const T * kh = kv + (r * s + j) * d + h * dh;
            if (dq) {
              for (std::size_t e = 0; e < dh; ++e) {
                dq[r * d + h * dh + e] += ds * kh[e];
              }
            }
            if (dk) {
              T * dkh = dk + (r * s + j) * d + h * dh;
              for (std::size_t e = 0; e < dh; ++e) {
                dkh[e] += ds * qh[e];
              }
            }
          }
        }
      }
    });
}

/**
 * @brief Softmax over the trailing axis.
 */
template <typename T>
Var<T> softmax(const Var<T> & x)
{
  const std::size_t d = x.shape().back();
  const std::size_t rows = x.value().size() / d;
  Tensor<T> y(x.shape());
  for (std::size_t r = 0; r < rows; ++r) {
    const T * in = x.value().data() + r * d;
    T * out = y.data() + r * d;
    const T mx = *std::max_element(in, in + d);
    T z = 0;
    for (std::size_t k = 0; k < d; ++k) {
      out[k] = std::exp(in[k] - mx);
      z += out[k];
    }
    for (std::size_t k = 0; k < d; ++k) {
      out[k] /= z;
    }
  }
  const std::size_t xid = x.id();
  const std::size_t yid = x.tape()->size();
  return x.tape()->emit(std::move(y), {x}, [=](Tape<T> & t, const Tensor<T> & gy) {
    const auto & yv = t.value(yid);
    auto & gx = t.grad(xid);
    for (std::size_t r = 0; r < rows; ++r) {
      T dotv = 0;
      for (std::size_t k = 0; k < d; ++k) {
        dotv += yv[r * d + k] * gy[r * d + k];
      }
      for (std::size_t k = 0; k < d; ++k) {
        gx[r * d + k] += yv[r * d + k] * (gy[r * d + k] - dotv);
      }
    }
  });
}

/**
 * @brief Stack K tensors of shape [B, F...] into [B, K, F...].
 */
template <typename T>
Var<T> stack_axis1(const std::vector<Var<T>> & parts)
{
  expect(!parts.empty(), "stack_axis1: no inputs");
  const Shape & s0 = parts[0].shape();
  const std::size_t batch = s0[0];
  const std::size_t inner = parts[0].value().size() / std::max<std::size_t>(batch, 1);
  const std::size_t kk = parts.size();
  Shape ys{batch, kk};
  ys.insert(ys.end(), s0.begin() + 1, s0.end());
  Tensor<T> y(ys);
  std::vector<std::size_t> ids;
  for (std::size_t k = 0; k < kk; ++k) {
    expect(parts[k].shape() == s0, "stack_axis1: shape mismatch");
    ids.push_back(parts[k].id());
    for (std::size_t b = 0; b < batch; ++b) {
      std::copy_n(
        parts[k].value().data() + b * inner, inner, y.data() + (b * kk + k) * inner);
    }
  }
  return parts[0].tape()->emit(
    std::move(y), parts, [=, ids = std::move(ids)](Tape<T> & t, const Tensor<T> & gy) {
      for (std::size_t k = 0; k < kk; ++k) {
        if (!t.needs_grad(ids[k])) {
          continue;
        }
        auto & g = t.grad(ids[k]);
        for (std::size_t b = 0; b < batch; ++b) {
          for (std::size_t e = 0; e < inner; ++e) {
            g[b * inner + e] += gy[(b * kk + k) * inner + e];
          }
        }
      }
    });
}

template <typename T>
Var<T> reshape(const Var<T> & x, Shape shape)
{
  Tensor<T> y = x.value();
  y.reshape(std::move(shape));
  const std::size_t xid = x.id();
  return x.tape()->emit(std::move(y), {x}, [xid](Tape<T> & t, const Tensor<T> & gy) {
    auto & gx = t.grad(xid);
    for (std::size_t i = 0; i < gx.size(); ++i) {
      gx[i] += gy[i];
    }
  });
}

/**
 * @brief Left-multiply every [R, C] slice of x [B, R, C] by the constant matrix M [T, R].
 */
template <typename T>
Var<T> apply_const_matrix(const Tensor<T> & M, const Var<T> & x)
{
  const auto & xs = x.shape();
  expect(M.ndim() == 2 && xs.size() == 3 && xs[1] == M.dim(1), "apply_const_matrix: shape");
  const std::size_t batch = xs[0];
  const std::size_t r = xs[1];
  const std::size_t c = xs[2];
  const std::size_t tt = M.dim(0);
  Tensor<T> y({batch, tt, c});
  detail::ConstMapMat<T> Mm(M.data(), tt, r);
  for (std::size_t b = 0; b < batch; ++b) {
    detail::ConstMapMat<T> X(x.value().data() + b * r * c, r, c);
    detail::MapMat<T> Y(y.data() + b * tt * c, tt, c);
    Y.noalias() = Mm * X;
  }
  const std::size_t xid = x.id();
  return x.tape()->emit(std::move(y), {x}, [=](Tape<T> & t, const Tensor<T> & gy) {
    detail::ConstMapMat<T> Mm(M.data(), tt, r);
    T * gx = t.grad(xid).data();
    for (std::size_t b = 0; b < batch; ++b) {
      detail::ConstMapMat<T> dY(gy.data() + b * tt * c, tt, c);
      detail::MapMat<T> dX(gx + b * r * c, r, c);
      dX.noalias() += Mm.transpose() * dY;
    }
  });
}

/**
 * @brief Unit heading per step from velocities v [B, S, 2].
 *
 * Steps with speed below `min_speed` repeat the previous step's heading; the first step falls
 * back to (1, 0), the anchor heading in the local frame.
 */
template <typename T>
Var<T> yaw_from_velocity(const Var<T> & v, T min_speed)
{
  const auto & vs = v.shape();
  expect(vs.size() == 3 && vs[2] == 2, "yaw_from_velocity: input must be [B, S, 2]");
  const std::size_t batch = vs[0];
  const std::size_t steps = vs[1];
  Tensor<T> y(vs);
  // source step whose velocity defines each output, or -1 for the fallback
  std::vector<long> src(batch * steps, -1);
  for (std::size_t b = 0; b < batch; ++b) {
    T px = 1;
    T py = 0;
    long ps = -1;
    for (std::size_t s = 0; s < steps; ++s) {
      const std::size_t i = b * steps + s;
      const T vx = v.value()[2 * i];
      const T vy = v.value()[2 * i + 1];
      const T speed = std::sqrt(vx * vx + vy * vy);
      if (speed >= min_speed) {
        px = vx / speed;
        py = vy / speed;
        ps = static_cast<long>(i);
      }
      y[2 * i] = px;
      y[2 * i + 1] = py;
      src[i] = ps;
    }
  }
  const std::size_t vid = v.id();
  const std::size_t yid = v.tape()->size();
  return v.tape()->emit(
    std::move(y), {v}, [vid, yid, src = std::move(src)](Tape<T> & t, const Tensor<T> & gy) {
      const auto & yv = t.value(yid);
      const auto & vv = t.value(vid);
      std::vector<T> acc(gy.size(), T(0));
      for (std::size_t i = 0; i < src.size(); ++i) {
        if (src[i] < 0) {
          continue;
        }
        acc[2 * src[i]] += gy[2 * i];
        acc[2 * src[i] + 1] += gy[2 * i + 1];
      }
      auto & gv = t.grad(vid);
      for (std::size_t i = 0; i < src.size(); ++i) {
        if (src[i] != static_cast<long>(i)) {
          continue;
        }
        const T ux = yv[2 * i];
        const T uy = yv[2 * i + 1];
        const T speed = std::sqrt(vv[2 * i] * vv[2 * i] + vv[2 * i + 1] * vv[2 * i + 1]);
        const T proj = ux * acc[2 * i] + uy * acc[2 * i + 1];
        gv[2 * i] += (acc[2 * i] - ux * proj) / speed;
        gv[2 * i + 1] += (acc[2 * i + 1] - uy * proj) / speed;
      }
    });
}

/**
 * @brief Select one slice per row: x [B, K, F...] with index[b] -> [B, F...].
 */
template <typename T>
Var<T> select_along_axis1(const Var<T> & x, const std::vector<std::size_t> & index)
{
  const auto & xs = x.shape();
  expect(xs.size() >= 2 && xs[0] == index.size(), "select_along_axis1: index count mismatch");
  const std::size_t batch = xs[0];
  const std::size_t kk = xs[1];
  const std::size_t inner = x.value().size() / (batch * kk);
  Shape ys{batch};
  ys.insert(ys.end(), xs.begin() + 2, xs.end());
  Tensor<T> y(ys);
  for (std::size_t b = 0; b < batch; ++b) {
    expect(index[b] < kk, "select_along_axis1: index out of range");
    std::copy_n(x.value().data() + (b * kk + index[b]) * inner, inner, y.data() + b * inner);
  }
  const std::size_t xid = x.id();
  return x.tape()->emit(std::move(y), {x}, [=](Tape<T> & t, const Tensor<T> & gy) {
    auto & gx = t.grad(xid);
    for (std::size_t b = 0; b < batch; ++b) {
      for (std::size_t e = 0; e < inner; ++e) {
        gx[(b * kk + index[b]) * inner + e] += gy[b * inner + e];
      }
    }
  });
}

template <typename T>
Var<T> sum_all(const Var<T> & x)
{
  T acc = 0;
  for (auto v : x.value().values()) {
    acc += v;
  }
  const std::size_t xid = x.id();
  return x.tape()->emit(Tensor<T>({1}, {acc}), {x}, [xid](Tape<T> & t, const Tensor<T> & gy) {
    auto & gx = t.grad(xid);
    for (std::size_t i = 0; i < gx.size(); ++i) {
      gx[i] += gy[0];
    }
  });
}

/**
 * @brief Scalar weighted sum `sum_i w_i * x_i` of scalar inputs.
 */
template <typename T>
Var<T> weighted_sum(const std::vector<Var<T>> & xs, const std::vector<T> & weights)
{
  expect(!xs.empty() && xs.size() == weights.size(), "weighted_sum: size mismatch");
  T acc = 0;
  std::vector<std::size_t> ids;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    expect(xs[i].value().size() == 1, "weighted_sum: inputs must be scalars");
    acc += weights[i] * xs[i].value()[0];
    ids.push_back(xs[i].id());
  }
  return xs[0].tape()->emit(
    Tensor<T>({1}, {acc}), xs, [ids, weights](Tape<T> & t, const Tensor<T> & gy) {
      for (std::size_t i = 0; i < ids.size(); ++i) {
        if (t.needs_grad(ids[i])) {
          t.grad(ids[i])[0] += weights[i] * gy[0];
        }
      }
    });
}

/**
 * @brief Mean smooth-L1 between `pred` and a constant target, transition point `beta`.
 */
template <typename T>
Var<T> smooth_l1_loss(const Var<T> & pred, const Tensor<T> & target, T beta = T(1))
{
  detail::check_same_shape(pred.shape(), target.shape(), "smooth_l1_loss");
  const std::size_t n = target.size();
  T acc = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const T e = std::abs(pred.value()[i] - target[i]);
    acc += e < beta ? T(0.5) * e * e / beta : e - T(0.5) * beta;
  }
  const std::size_t pid = pred.id();
  return pred.tape()->emit(
    Tensor<T>({1}, {acc / static_cast<T>(n)}), {pred},
    [pid, target, beta, n](Tape<T> & t, const Tensor<T> & gy) {
      const auto & pv = t.value(pid);
      auto & gp = t.grad(pid);
      const T inv = gy[0] / static_cast<T>(n);
      for (std::size_t i = 0; i < n; ++i) {
        const T e = pv[i] - target[i];
        const T d = std::abs(e) < beta ? e / beta : (e > 0 ? T(1) : T(-1));
        gp[i] += inv * d;
      }
    });
}

/**
 * @brief Mean over vectors of (1 - cos(pred, target)) / 2 for pred/target [..., 2].
 */
template <typename T>
Var<T> cosine_yaw_loss(const Var<T> & pred, const Tensor<T> & target)
{
  detail::check_same_shape(pred.shape(), target.shape(), "cosine_yaw_loss");
  expect(target.shape().back() == 2, "cosine_yaw_loss: trailing extent must be 2");
  const std::size_t n = target.size() / 2;
  T acc = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const T px = pred.value()[2 * i];
    const T py = pred.value()[2 * i + 1];
    const T gx = target[2 * i];
    const T gyv = target[2 * i + 1];
    const T np = std::sqrt(px * px + py * py);
    const T ng = std::sqrt(gx * gx + gyv * gyv);
    acc += (T(1) - std::clamp((px * gx + py * gyv) / (np * ng), T(-1), T(1))) / T(2);
  }
  const std::size_t pid = pred.id();
  return pred.tape()->emit(
    Tensor<T>({1}, {acc / static_cast<T>(n)}), {pred},
    [pid, target, n](Tape<T> & t, const Tensor<T> & gy) {
      const auto & pv = t.value(pid);
      auto & gp = t.grad(pid);
      const T w = -gy[0] / (T(2) * static_cast<T>(n));
      for (std::size_t i = 0; i < n; ++i) {
        const T px = pv[2 * i];
        const T py = pv[2 * i + 1];
        const T gx = target[2 * i];
        const T gyv = target[2 * i + 1];
        const T np = std::sqrt(px * px + py * py);
        const T ng = std::sqrt(gx * gx + gyv * gyv);
        const T c = (px * gx + py * gyv) / (np * ng);
        gp[2 * i] += w * (gx / (np * ng) - c * px / (np * np));
        gp[2 * i + 1] += w * (gyv / (np * ng) - c * py / (np * np));
      }
    });
}

/**
 * @brief Mean over rows of (1 / (K - 1)) * sum_{k != k*} max(0, s_k + margin - s_{k*}) for
 * scores [B, K]. Zero when K = 1.
 */
template <typename T>
Var<T> max_margin_loss(const Var<T> & scores, const std::vector<std::size_t> & winner, T margin)
{
  const auto & ss = scores.shape();
  expect(ss.size() == 2 && ss[0] == winner.size(), "max_margin_loss: shape mismatch");
  const std::size_t batch = ss[0];
  const std::size_t kk = ss[1];
  T acc = 0;
  if (kk > 1) {
    for (std::size_t b = 0; b < batch; ++b) {
      const T * s = scores.value().data() + b * kk;
      for (std::size_t k = 0; k < kk; ++k) {
        if (k != winner[b]) {
          const T h = s[k] + margin - s[winner[b]];
          acc += h < T(0) ? T(0) : h;
        }
      }
    }
    acc /= static_cast<T>((kk - 1) * batch);
  }
  const std::size_t sid = scores.id();
  return scores.tape()->emit(
    Tensor<T>({1}, {acc}), {scores}, [=](Tape<T> & t, const Tensor<T> & gy) {
      if (kk < 2) {
        return;
      }
      const auto & sv = t.value(sid);
      auto & gs = t.grad(sid);
      const T w = gy[0] / static_cast<T>((kk - 1) * batch);
      for (std::size_t b = 0; b < batch; ++b) {
        const T * s = sv.data() + b * kk;
        for (std::size_t k = 0; k < kk; ++k) {
          if (k != winner[b] && s[k] + margin - s[winner[b]] > T(0)) {
            gs[b * kk + k] += w;
            gs[b * kk + winner[b]] -= w;
          }
        }
      }
    });
}
}  // namespace simpl::nn
#endif  // SIMPL__NN__OPS_HPP_
