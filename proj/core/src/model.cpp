#include "dplab/model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "dplab/errors.hpp"
#include "dplab/nn/checkpoint.hpp"
#include "dplab/nn/ops.hpp"
#include "dplab/rng.hpp"

namespace dplab {

std::string_view to_string(ModelKind kind) noexcept {
  return kind == ModelKind::Dpl ? "dpl" : "unet";
}

ModelKind parse_model_kind(std::string_view name) {
  if (name == "dpl") return ModelKind::Dpl;
  if (name == "unet" || name == "unet_baseline") return ModelKind::UnetBaseline;
  throw std::invalid_argument("unknown model '" + std::string(name) + "' (expected dpl, unet or unet_baseline)");
}

namespace {

nn::UNetConfig with_inputs(nn::UNetConfig cfg, int in_channels) {
  cfg.in_channels = in_channels;
  cfg.out_channels = 1;
  return cfg;
}

template <typename T>
nn::Tensor<T> zero_scalar() {
  return nn::Tensor<T>::scalar(T(0));
}

}  // namespace

template <typename T>
DplModel<T>::DplModel(ModelKind kind, nn::UNetConfig net, nn::AdamConfig adam, std::uint64_t seed)
    : kind_(kind),
      net_(net),
      noise_(with_inputs(net, 1)),
      context_(with_inputs(net, 1)),
      fusion_(with_inputs(net, 2)) {
  Rng seeds(seed);
  noise_.init_weights(seeds.next_u64());
  context_.init_weights(seeds.next_u64());
  fusion_.init_weights(seeds.next_u64());
  adam_noise_.config = adam_context_.config = adam_fusion_.config = adam;
}

template <typename T>
DplBatch<T> DplModel<T>::forward(const nn::Tensor<T>& x) const {
  if (x.shape().c != 1) throw std::invalid_argument("DplModel: input must have one channel, got " + x.shape().str());
  DplBatch<T> b;
  b.x = x;
  b.context = context_.forward(x);
  if (kind_ == ModelKind::UnetBaseline) {
    b.output = b.context;
    return b;
  }
  b.eta = noise_.forward(x);
  b.residual = nn::sub(x, b.eta);
  b.output = fusion_.forward(nn::concat_channels(b.context, b.residual));
  return b;
}

template <typename T>
LossGraph<T> dpl_loss(const DplBatch<T>& batch, const nn::Tensor<T>& y, const LossTerms& terms) {
  auto term = [&](bool enabled, const nn::Tensor<T>& pred) {
    return enabled && pred.defined() ? nn::mse_loss(y, pred) : zero_scalar<T>();
  };
  const bool dual = batch.residual.defined();
  const auto ln = term(terms.noise, batch.residual);
  const auto lc = term(terms.context, batch.context);
  const auto lf = term(terms.fusion && dual, batch.output);
  LossGraph<T> g;
  g.total = nn::add(nn::add(ln, lc), lf);
  g.report.l_n = static_cast<double>(ln.item());
  g.report.l_c = static_cast<double>(lc.item());
  g.report.l_f = static_cast<double>(lf.item());
  g.report.l_o = static_cast<double>(g.total.item());
  g.report.batch = batch.x.shape().n;
  return g;
}

template <typename T>
LossReport DplModel<T>::train_step(const nn::Tensor<T>& x, const nn::Tensor<T>& y, const LossTerms& terms,
                                   long iteration) {
  zero_grad();
  const auto batch = forward(x);
  if (y.shape() != batch.output.shape()) {
    throw std::invalid_argument("train_step: target " + y.shape().str() + " vs output " +
                                batch.output.shape().str());
  }
  auto loss = dpl_loss(batch, y, terms);
  const auto& r = loss.report;
  if (!std::isfinite(r.l_o) || !std::isfinite(r.l_n) || !std::isfinite(r.l_c) || !std::isfinite(r.l_f)) {
    std::ostringstream os;
    os << "non-finite loss";
    if (iteration >= 0) os << " at iteration " << iteration;
    os << ": l_n=" << r.l_n << " l_c=" << r.l_c << " l_f=" << r.l_f << " l_o=" << r.l_o;
    throw TrainingError(os.str());
  }
  nn::backward(loss.total);
  if (kind_ == ModelKind::Dpl) {
    nn::adam_step(noise_.parameters(), adam_noise_);
    nn::adam_step(fusion_.parameters(), adam_fusion_);
  }
  nn::adam_step(context_.parameters(), adam_context_);
  return r;
}

template <typename T>
void DplModel<T>::zero_grad() {
  noise_.zero_grad();
  context_.zero_grad();
  fusion_.zero_grad();
}

template <typename T>
void DplModel<T>::set_learning_rate(double lr) {
  adam_noise_.config.lr = adam_context_.config.lr = adam_fusion_.config.lr = lr;
}

template <typename T>
std::vector<const nn::UNet<T>*> DplModel<T>::active() const {
  if (kind_ == ModelKind::UnetBaseline) return {&context_};
  return {&noise_, &context_, &fusion_};
}

template <typename T>
std::vector<std::vector<T>> DplModel<T>::snapshot() const {
  std::vector<std::vector<T>> out;
  for (const auto* net : active()) {
    for (const auto& p : net->parameters()) out.emplace_back(p.value.data().begin(), p.value.data().end());
  }
  return out;
}

template <typename T>
void DplModel<T>::restore(const std::vector<std::vector<T>>& values) {
  std::vector<nn::UNet<T>*> nets{&context_};
  if (kind_ == ModelKind::Dpl) nets = {&noise_, &context_, &fusion_};
  std::size_t k = 0;
  for (auto* net : nets) {
    for (auto& p : net->parameters()) {
      if (k >= values.size() || values[k].size() != p.value.numel()) {
        throw std::invalid_argument("DplModel::restore: snapshot does not match the model");
      }
      std::copy(values[k].begin(), values[k].end(), p.value.data().begin());
      ++k;
    }
  }
  if (k != values.size()) throw std::invalid_argument("DplModel::restore: snapshot does not match the model");
}

template <typename T>
void DplModel<T>::save(const std::filesystem::path& path) const {
  std::vector<nn::CheckpointEntry> entries;
  if (kind_ == ModelKind::Dpl) nn::append_entries(entries, "noise.", noise_.parameters());
  nn::append_entries(entries, "context.", context_.parameters());
  if (kind_ == ModelKind::Dpl) nn::append_entries(entries, "fusion.", fusion_.parameters());
  nn::save_checkpoint(path, entries);
}

template <typename T>
void DplModel<T>::load(const std::filesystem::path& path) {
  const auto entries = nn::load_checkpoint(path);
  if (kind_ == ModelKind::Dpl) nn::restore_entries(entries, "noise.", noise_.parameters());
  nn::restore_entries(entries, "context.", context_.parameters());
  if (kind_ == ModelKind::Dpl) nn::restore_entries(entries, "fusion.", fusion_.parameters());
}

template <typename T>
nn::Tensor<T> to_tensor(const std::vector<const Image*>& images) {
  if (images.empty()) throw std::invalid_argument("to_tensor: no images");
  const Image& first = *images.front();
  std::vector<T> values;
  values.reserve(first.size() * images.size());
  for (const Image* img : images) {
    require_same_shape(first, *img, "to_tensor");
    for (float v : img->pixels()) values.push_back(static_cast<T>(v));
  }
  return nn::Tensor<T>::from({static_cast<int>(images.size()), 1, first.height(), first.width()},
                             std::move(values));
}

template <typename T>
Image to_image(const nn::Tensor<T>& t, int n) {
  const nn::Shape s = t.shape();
  if (s.c != 1 || n < 0 || n >= s.n) throw std::invalid_argument("to_image: bad batch index or channels");
  Image out(s.w, s.h);
  const auto src = t.data().subspan(static_cast<std::size_t>(n) * s.plane(), s.plane());
  auto px = out.pixels();
  for (std::size_t i = 0; i < px.size(); ++i) px[i] = static_cast<float>(src[i]);
  return out;
}

template class DplModel<float>;
template class DplModel<double>;
template LossGraph<float> dpl_loss(const DplBatch<float>&, const nn::Tensor<float>&, const LossTerms&);
template LossGraph<double> dpl_loss(const DplBatch<double>&, const nn::Tensor<double>&, const LossTerms&);
template nn::Tensor<float> to_tensor(const std::vector<const Image*>&);
template nn::Tensor<double> to_tensor(const std::vector<const Image*>&);
template Image to_image(const nn::Tensor<float>&, int);
template Image to_image(const nn::Tensor<double>&, int);

}  // namespace dplab
