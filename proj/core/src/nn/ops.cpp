#include "dplab/nn/ops.hpp"

#include <Eigen/Core>
#include <stdexcept>

namespace dplab::nn {

namespace {

template <typename T>
using Mat = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
template <typename T>
using MatMap = Eigen::Map<Mat<T>>;
template <typename T>
using ConstMatMap = Eigen::Map<const Mat<T>>;

template <typename T>
using NodePtr = std::shared_ptr<detail::Node<T>>;

[[noreturn]] void shape_error(const std::string& what) { throw std::invalid_argument(what); }

struct ConvGeometry {
  int c_in, k, stride, pad, h, w, ho, wo;

  std::size_t rows() const { return static_cast<std::size_t>(c_in) * k * k; }
  std::size_t cols() const { return static_cast<std::size_t>(ho) * wo; }
};

template <typename T>
void im2col(const T* x, const ConvGeometry& g, T* cols) {
  const std::size_t ncols = g.cols();
  for (int c = 0; c < g.c_in; ++c) {
    for (int ky = 0; ky < g.k; ++ky) {
      for (int kx = 0; kx < g.k; ++kx) {
        T* row = cols + ((static_cast<std::size_t>(c) * g.k + ky) * g.k + kx) * ncols;
        for (int oy = 0; oy < g.ho; ++oy) {
          const int iy = oy * g.stride + ky - g.pad;
          T* out = row + static_cast<std::size_t>(oy) * g.wo;
          if (iy < 0 || iy >= g.h) {
            std::fill(out, out + g.wo, T(0));
            continue;
          }
          const T* in = x + (static_cast<std::size_t>(c) * g.h + iy) * g.w;
          for (int ox = 0; ox < g.wo; ++ox) {
            const int ix = ox * g.stride + kx - g.pad;
            out[ox] = (ix < 0 || ix >= g.w) ? T(0) : in[ix];
          }
        }
      }
    }
  }
}

template <typename T>
void col2im_add(const T* cols, const ConvGeometry& g, T* dx) {
  const std::size_t ncols = g.cols();
  for (int c = 0; c < g.c_in; ++c) {
    for (int ky = 0; ky < g.k; ++ky) {
      for (int kx = 0; kx < g.k; ++kx) {
        const T* row = cols + ((static_cast<std::size_t>(c) * g.k + ky) * g.k + kx) * ncols;
        for (int oy = 0; oy < g.ho; ++oy) {
          const int iy = oy * g.stride + ky - g.pad;
          if (iy < 0 || iy >= g.h) continue;
          const T* src = row + static_cast<std::size_t>(oy) * g.wo;
          T* out = dx + (static_cast<std::size_t>(c) * g.h + iy) * g.w;
          for (int ox = 0; ox < g.wo; ++ox) {
            const int ix = ox * g.stride + kx - g.pad;
            if (ix >= 0 && ix < g.w) out[ix] += src[ox];
          }
        }
      }
    }
  }
}

}  // namespace

template <typename T>
Tensor<T> conv2d(const Tensor<T>& x, const Tensor<T>& weight, const Tensor<T>& bias, int stride,
                 int pad) {
  const Shape xs = x.shape();
  const Shape ws = weight.shape();
  if (ws.c != xs.c || ws.h != ws.w || ws.h < 1) {
    shape_error("conv2d: weight " + ws.str() + " incompatible with input " + xs.str());
  }
  if (bias.shape() != Shape{1, ws.n, 1, 1}) shape_error("conv2d: bias shape " + bias.shape().str());
  if (stride < 1 || pad < 0) shape_error("conv2d: invalid stride/pad");
  const int ho = (xs.h + 2 * pad - ws.h) / stride + 1;
  const int wo = (xs.w + 2 * pad - ws.w) / stride + 1;
  if (ho < 1 || wo < 1) shape_error("conv2d: kernel larger than padded input " + xs.str());

  const ConvGeometry g{xs.c, ws.h, stride, pad, xs.h, xs.w, ho, wo};
  const int c_out = ws.n;
  auto out = detail::make_result<T>({xs.n, c_out, ho, wo}, {x.node(), weight.node(), bias.node()});

  Buffer<T> cols(g.rows() * g.cols());
  const ConstMatMap<T> wmat(weight.data().data(), c_out, static_cast<Eigen::Index>(g.rows()));
  const auto b = bias.data();
  for (int n = 0; n < xs.n; ++n) {
    im2col(x.data().data() + static_cast<std::size_t>(n) * xs.c * xs.plane(), g, cols.data());
    MatMap<T> y(out->value.data() + static_cast<std::size_t>(n) * c_out * g.cols(), c_out,
                static_cast<Eigen::Index>(g.cols()));
    const ConstMatMap<T> cm(cols.data(), static_cast<Eigen::Index>(g.rows()),
                            static_cast<Eigen::Index>(g.cols()));
    y.noalias() = wmat * cm;
    for (int co = 0; co < c_out; ++co) y.row(co).array() += b[co];
  }

  if (out->requires_grad) {
    out->backward_fn = [g](detail::Node<T>& self) {
      auto& xn = *self.parents[0];
      auto& wn = *self.parents[1];
      auto& bn = *self.parents[2];
      const int c_out = self.shape.c;
      const auto ncols = static_cast<Eigen::Index>(g.cols());
      const auto nrows = static_cast<Eigen::Index>(g.rows());
      const std::size_t in_stride = static_cast<std::size_t>(g.c_in) * g.h * g.w;
      Buffer<T> cols(g.rows() * g.cols());
      const ConstMatMap<T> wmat(wn.value.data(), c_out, nrows);
      for (int n = 0; n < self.shape.n; ++n) {
        const ConstMatMap<T> dy(self.grad.data() + static_cast<std::size_t>(n) * c_out * g.cols(),
                                c_out, ncols);
        if (wn.requires_grad || xn.requires_grad) {
          im2col(xn.value.data() + n * in_stride, g, cols.data());
        }
        if (wn.requires_grad) {
          MatMap<T> dw(wn.ensure_grad().data(), c_out, nrows);
          const ConstMatMap<T> cm(cols.data(), nrows, ncols);
          dw.noalias() += dy * cm.transpose();
        }
        if (bn.requires_grad) {
          auto& db = bn.ensure_grad();
          for (int co = 0; co < c_out; ++co) db[co] += dy.row(co).sum();
        }
        if (xn.requires_grad) {
          MatMap<T> dcols(cols.data(), nrows, ncols);
          dcols.noalias() = wmat.transpose() * dy;
          col2im_add(cols.data(), g, xn.ensure_grad().data() + n * in_stride);
        }
      }
    };
  }
  return Tensor<T>(std::move(out));
}

template <typename T>
Tensor<T> conv1x1(const Tensor<T>& x, const Tensor<T>& weight, const Tensor<T>& bias) {
  if (weight.shape().h != 1 || weight.shape().w != 1) {
    shape_error("conv1x1: weight must be (C_out, C_in, 1, 1), got " + weight.shape().str());
  }
  return conv2d(x, weight, bias, 1, 0);
}

template <typename T>
Tensor<T> upconv2(const Tensor<T>& x, const Tensor<T>& weight, const Tensor<T>& bias) {
  const Shape xs = x.shape();
  const Shape ws = weight.shape();
  if (ws.n != xs.c || ws.h != 2 || ws.w != 2) {
    shape_error("upconv2: weight " + ws.str() + " incompatible with input " + xs.str());
  }
  const int c_out = ws.c;
  if (bias.shape() != Shape{1, c_out, 1, 1}) shape_error("upconv2: bias shape " + bias.shape().str());

  const Shape os{xs.n, c_out, 2 * xs.h, 2 * xs.w};
  auto out = detail::make_result<T>(os, {x.node(), weight.node(), bias.node()});
  const auto hw = static_cast<Eigen::Index>(xs.plane());
  const auto taps = static_cast<Eigen::Index>(c_out) * 4;
  Buffer<T> ycols(static_cast<std::size_t>(taps * hw));
  const ConstMatMap<T> wmat(weight.data().data(), xs.c, taps);
  const auto b = bias.data();
  for (int n = 0; n < xs.n; ++n) {
    const ConstMatMap<T> xm(x.data().data() + static_cast<std::size_t>(n) * xs.c * hw, xs.c, hw);
    MatMap<T> yc(ycols.data(), taps, hw);
    yc.noalias() = wmat.transpose() * xm;
    T* y = out->value.data() + static_cast<std::size_t>(n) * c_out * os.plane();
    for (int co = 0; co < c_out; ++co) {
      for (int a = 0; a < 2; ++a) {
        for (int bb = 0; bb < 2; ++bb) {
          const T* src = ycols.data() + static_cast<std::size_t>((co * 4 + a * 2 + bb) * hw);
          for (int i = 0; i < xs.h; ++i) {
            T* dst = y + (static_cast<std::size_t>(co) * os.h + 2 * i + a) * os.w + bb;
            for (int j = 0; j < xs.w; ++j) dst[2 * j] = src[i * xs.w + j] + b[co];
          }
        }
      }
    }
  }

  if (out->requires_grad) {
    out->backward_fn = [xs, os, c_out, hw, taps](detail::Node<T>& self) {
      auto& xn = *self.parents[0];
      auto& wn = *self.parents[1];
      auto& bn = *self.parents[2];
      Buffer<T> dycols(static_cast<std::size_t>(taps * hw));
      const ConstMatMap<T> wmat(wn.value.data(), xs.c, taps);
      for (int n = 0; n < xs.n; ++n) {
        const T* dy = self.grad.data() + static_cast<std::size_t>(n) * c_out * os.plane();
        for (int co = 0; co < c_out; ++co) {
          for (int a = 0; a < 2; ++a) {
            for (int bb = 0; bb < 2; ++bb) {
              T* dst = dycols.data() + static_cast<std::size_t>((co * 4 + a * 2 + bb) * hw);
              for (int i = 0; i < xs.h; ++i) {
                const T* src = dy + (static_cast<std::size_t>(co) * os.h + 2 * i + a) * os.w + bb;
                for (int j = 0; j < xs.w; ++j) dst[i * xs.w + j] = src[2 * j];
              }
            }
          }
        }
        const ConstMatMap<T> dyc(dycols.data(), taps, hw);
        if (bn.requires_grad) {
          auto& db = bn.ensure_grad();
          for (int co = 0; co < c_out; ++co) db[co] += dyc.middleRows(co * 4, 4).sum();
        }
        if (wn.requires_grad) {
          const ConstMatMap<T> xm(xn.value.data() + static_cast<std::size_t>(n) * xs.c * hw, xs.c, hw);
          MatMap<T> dw(wn.ensure_grad().data(), xs.c, taps);
          dw.noalias() += xm * dyc.transpose();
        }
        if (xn.requires_grad) {
          MatMap<T> dx(xn.ensure_grad().data() + static_cast<std::size_t>(n) * xs.c * hw, xs.c, hw);
          dx.noalias() += wmat * dyc;
        }
      }
    };
  }
  return Tensor<T>(std::move(out));
}

template <typename T>
Tensor<T> relu(const Tensor<T>& x) {
  auto out = detail::make_result<T>(x.shape(), {x.node()});
  const auto in = x.data();
  for (std::size_t i = 0; i < in.size(); ++i) out->value[i] = in[i] > T(0) ? in[i] : T(0);
  if (out->requires_grad) {
    out->backward_fn = [](detail::Node<T>& self) {
      auto& xn = *self.parents[0];
      auto& dx = xn.ensure_grad();
      for (std::size_t i = 0; i < dx.size(); ++i) {
        if (xn.value[i] > T(0)) dx[i] += self.grad[i];
      }
    };
  }
  return Tensor<T>(std::move(out));
}

template <typename T>
Tensor<T> maxpool2(const Tensor<T>& x) {
  const Shape xs = x.shape();
  if (xs.h % 2 != 0 || xs.w % 2 != 0) shape_error("maxpool2: odd spatial size " + xs.str());
  const Shape os{xs.n, xs.c, xs.h / 2, xs.w / 2};
  auto out = detail::make_result<T>(os, {x.node()});
  std::vector<std::uint32_t> argmax(os.numel());
  const auto in = x.data();
  std::size_t o = 0;
  for (int nc = 0; nc < xs.n * xs.c; ++nc) {
    const std::size_t base = static_cast<std::size_t>(nc) * xs.plane();
    for (int i = 0; i < os.h; ++i) {
      for (int j = 0; j < os.w; ++j, ++o) {
        std::size_t best = base + static_cast<std::size_t>(2 * i) * xs.w + 2 * j;
        const std::size_t cand[3] = {best + 1, best + xs.w, best + xs.w + 1};
        for (std::size_t c : cand) {
          if (in[c] > in[best]) best = c;
        }
        out->value[o] = in[best];
        argmax[o] = static_cast<std::uint32_t>(best);
      }
    }
  }
  if (out->requires_grad) {
    out->backward_fn = [argmax = std::move(argmax)](detail::Node<T>& self) {
      auto& dx = self.parents[0]->ensure_grad();
      for (std::size_t i = 0; i < argmax.size(); ++i) dx[argmax[i]] += self.grad[i];
    };
  }
  return Tensor<T>(std::move(out));
}

template <typename T>
Tensor<T> concat_channels(const Tensor<T>& a, const Tensor<T>& b) {
  const Shape as = a.shape();
  const Shape bs = b.shape();
  if (as.n != bs.n || as.h != bs.h || as.w != bs.w) {
    shape_error("concat_channels: " + as.str() + " vs " + bs.str());
  }
  const Shape os{as.n, as.c + bs.c, as.h, as.w};
  auto out = detail::make_result<T>(os, {a.node(), b.node()});
  const std::size_t ca = static_cast<std::size_t>(as.c) * as.plane();
  const std::size_t cb = static_cast<std::size_t>(bs.c) * bs.plane();
  for (int n = 0; n < as.n; ++n) {
    std::copy_n(a.data().data() + n * ca, ca, out->value.data() + n * (ca + cb));
    std::copy_n(b.data().data() + n * cb, cb, out->value.data() + n * (ca + cb) + ca);
  }
  if (out->requires_grad) {
    out->backward_fn = [ca, cb](detail::Node<T>& self) {
      const int batch = self.shape.n;
      for (int side = 0; side < 2; ++side) {
        auto& p = *self.parents[side];
        if (!p.requires_grad) continue;
        auto& g = p.ensure_grad();
        const std::size_t len = side == 0 ? ca : cb;
        const std::size_t off = side == 0 ? 0 : ca;
        for (int n = 0; n < batch; ++n) {
          const T* src = self.grad.data() + n * (ca + cb) + off;
          T* dst = g.data() + n * len;
          for (std::size_t i = 0; i < len; ++i) dst[i] += src[i];
        }
      }
    };
  }
  return Tensor<T>(std::move(out));
}

namespace {

template <typename T>
Tensor<T> add_or_sub(const Tensor<T>& a, const Tensor<T>& b, T sign, const char* name) {
  if (a.shape() != b.shape()) {
    shape_error(std::string(name) + ": " + a.shape().str() + " vs " + b.shape().str());
  }
  auto out = detail::make_result<T>(a.shape(), {a.node(), b.node()});
  const auto av = a.data();
  const auto bv = b.data();
  if (sign > T(0)) {
    for (std::size_t i = 0; i < av.size(); ++i) out->value[i] = av[i] + bv[i];
  } else {
    for (std::size_t i = 0; i < av.size(); ++i) out->value[i] = av[i] - bv[i];
  }
  if (out->requires_grad) {
    out->backward_fn = [sign](detail::Node<T>& self) {
      for (int side = 0; side < 2; ++side) {
        auto& p = *self.parents[side];
        if (!p.requires_grad) continue;
        auto& g = p.ensure_grad();
        if (side == 0 || sign > T(0)) {
          for (std::size_t i = 0; i < g.size(); ++i) g[i] += self.grad[i];
        } else {
          for (std::size_t i = 0; i < g.size(); ++i) g[i] -= self.grad[i];
        }
      }
    };
  }
  return Tensor<T>(std::move(out));
}

}  // namespace

template <typename T>
Tensor<T> add(const Tensor<T>& a, const Tensor<T>& b) {
  return add_or_sub(a, b, T(1), "add");
}

template <typename T>
Tensor<T> sub(const Tensor<T>& a, const Tensor<T>& b) {
  return add_or_sub(a, b, T(-1), "sub");
}

template <typename T>
Tensor<T> sum(const Tensor<T>& x) {
  auto out = detail::make_result<T>({1, 1, 1, 1}, {x.node()});
  T acc = T(0);
  for (T v : x.data()) acc += v;
  out->value[0] = acc;
  if (out->requires_grad) {
    out->backward_fn = [](detail::Node<T>& self) {
      auto& g = self.parents[0]->ensure_grad();
      for (auto& v : g) v += self.grad[0];
    };
  }
  return Tensor<T>(std::move(out));
}

template <typename T>
Tensor<T> mse_loss(const Tensor<T>& a, const Tensor<T>& b) {
  if (a.shape() != b.shape()) shape_error("mse_loss: " + a.shape().str() + " vs " + b.shape().str());
  auto out = detail::make_result<T>({1, 1, 1, 1}, {a.node(), b.node()});
  const auto av = a.data();
  const auto bv = b.data();
  // Accumulate in double so float and double graphs agree closely.
  double acc = 0.0;
  for (std::size_t i = 0; i < av.size(); ++i) {
    const double d = static_cast<double>(av[i]) - static_cast<double>(bv[i]);
    acc += d * d;
  }
  const double count = static_cast<double>(av.size());
  out->value[0] = static_cast<T>(acc / count);
  if (out->requires_grad) {
    out->backward_fn = [count](detail::Node<T>& self) {
      auto& an = *self.parents[0];
      auto& bn = *self.parents[1];
      const T scale = static_cast<T>(2.0 / count) * self.grad[0];
      if (an.requires_grad) {
        auto& g = an.ensure_grad();
        for (std::size_t i = 0; i < g.size(); ++i) g[i] += scale * (an.value[i] - bn.value[i]);
      }
      if (bn.requires_grad) {
        auto& g = bn.ensure_grad();
        for (std::size_t i = 0; i < g.size(); ++i) g[i] -= scale * (an.value[i] - bn.value[i]);
      }
    };
  }
  return Tensor<T>(std::move(out));
}

#define DPLAB_INSTANTIATE_OPS(T)                                                              \
  template Tensor<T> conv2d(const Tensor<T>&, const Tensor<T>&, const Tensor<T>&, int, int); \
  template Tensor<T> conv1x1(const Tensor<T>&, const Tensor<T>&, const Tensor<T>&);          \
  template Tensor<T> upconv2(const Tensor<T>&, const Tensor<T>&, const Tensor<T>&);          \
  template Tensor<T> relu(const Tensor<T>&);                                                 \
  template Tensor<T> maxpool2(const Tensor<T>&);                                             \
  template Tensor<T> concat_channels(const Tensor<T>&, const Tensor<T>&);                    \
  template Tensor<T> add(const Tensor<T>&, const Tensor<T>&);                                \
  template Tensor<T> sub(const Tensor<T>&, const Tensor<T>&);                                \
  template Tensor<T> sum(const Tensor<T>&);                                                  \
  template Tensor<T> mse_loss(const Tensor<T>&, const Tensor<T>&);

DPLAB_INSTANTIATE_OPS(float)
DPLAB_INSTANTIATE_OPS(double)

}  // namespace dplab::nn
