#include "dplab/train.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>
#include <stdexcept>

#include "dplab/errors.hpp"
#include "dplab/metrics.hpp"
#include "dplab/rng.hpp"

namespace dplab {

void TrainConfig::validate() const {
  if (batch_size < 1) throw std::invalid_argument("batch size must be >= 1");
  if (epochs ? *epochs < 1 : iterations < 1) throw std::invalid_argument("training budget must be positive");
  if (!(lr >= 0.0) || !std::isfinite(lr)) throw std::invalid_argument("learning rate must be finite and >= 0");
  if (eval_interval < 1) throw std::invalid_argument("eval interval must be >= 1");
  nn::UNetConfig{1, depth, base_channels, 1}.validate();
}

std::vector<PairSample> select(const std::vector<PairSample>& dataset, const std::vector<std::string>& ids) {
  std::map<std::string_view, const PairSample*> by_id;
  for (const auto& s : dataset) by_id.emplace(s.id, &s);
  std::vector<PairSample> out;
  out.reserve(ids.size());
  for (const auto& id : ids) {
    const auto it = by_id.find(id);
    if (it == by_id.end()) throw std::invalid_argument("select: unknown id " + id);
    out.push_back(*it->second);
  }
  return out;
}

namespace {

Image model_output(const DplModel<float>& model, const Image& noisy) {
  const auto y = model.predict(to_tensor<float>({&noisy}).detach());
  return clipped(to_image(y, 0));
}

}  // namespace

double mean_output_psnr(const DplModel<float>& model, const std::vector<PairSample>& dataset) {
  double sum = 0.0;
  std::size_t n = 0;
  for (const auto& s : dataset) {
    const double p = psnr(s.clean, model_output(model, s.noisy));
    if (std::isfinite(p)) {
      sum += p;
      ++n;
    }
  }
  return n ? sum / static_cast<double>(n) : std::numeric_limits<double>::infinity();
}

MetricReport evaluate(const DplModel<float>& model, const std::vector<PairSample>& dataset) {
  MetricReport report;
  const std::string algo(to_string(model.kind()));
  for (const auto& s : dataset) {
    report.add(s.id, algo, s.noise, s.clean, model_output(model, s.noisy));
    report.add(s.id, "noisy", s.noise, s.clean, s.noisy);
  }
  return report;
}

namespace {

struct DerivedSeeds {
  std::uint64_t model, split, order;
};

DerivedSeeds derive_seeds(std::uint64_t seed) {
  Rng r(seed);
  DerivedSeeds d{};
  d.model = r.next_u64();
  d.split = r.next_u64();
  d.order = r.next_u64();
  return d;
}

}  // namespace

DatasetSplit train_split(const TrainConfig& config, const std::vector<std::string>& ids) {
  if (ids.size() <= 1) return {ids, {}};
  return split_dataset(ids, config.train_ratio, derive_seeds(config.seed).split);
}

TrainResult train(const TrainConfig& config, const std::vector<PairSample>& dataset) {
  config.validate();
  if (dataset.empty()) throw std::invalid_argument("train: empty dataset");
  const Image& first = dataset.front().clean;
  const nn::UNetConfig net{1, config.depth, config.base_channels, 1};
  if (!net.accepts(first.height(), first.width())) {
    throw std::invalid_argument("train: image size must be divisible by 2^depth");
  }
  std::vector<std::string> ids;
  for (const auto& s : dataset) {
    require_same_shape(first, s.clean, "train");
    require_same_shape(first, s.noisy, "train");
    ids.push_back(s.id);
  }

  const DerivedSeeds seeds = derive_seeds(config.seed);
  const std::uint64_t order_seed = seeds.order;
  DatasetSplit split = train_split(config, ids);
  const auto train_set = select(dataset, split.train);
  const auto val_set = split.val.empty() ? train_set : select(dataset, split.val);

  nn::AdamConfig adam;
  adam.lr = config.lr;
  DplModel<float> model(config.model, net, adam, seeds.model);

  const std::size_t n_train = train_set.size();
  const std::size_t b = std::min<std::size_t>(static_cast<std::size_t>(config.batch_size), n_train);
  const long steps_per_epoch = static_cast<long>(n_train / b);
  const long total = config.epochs ? *config.epochs * steps_per_epoch : config.iterations;

  TrainResult result{model, {}, split, 0, -std::numeric_limits<double>::infinity(), 0, 0};
  auto best = model.snapshot();
  std::vector<std::size_t> order;
  std::size_t cursor = n_train;
  long epoch = -1;

  for (long it = 1; it <= total; ++it) {
    if (cursor + b > n_train) {
      ++epoch;
      order = seeded_permutation(n_train, order_seed + static_cast<std::uint64_t>(epoch));
      cursor = 0;
    }
    std::vector<const Image*> xs, ys;
    for (std::size_t k = 0; k < b; ++k) {
      xs.push_back(&train_set[order[cursor + k]].noisy);
      ys.push_back(&train_set[order[cursor + k]].clean);
    }
    cursor += b;
    LossReport loss;
    try {
      loss = model.train_step(to_tensor<float>(xs), to_tensor<float>(ys), config.terms, it);
    } catch (const TrainingError&) {
      if (config.dump_dir) {
        std::filesystem::create_directories(*config.dump_dir);
        model.save(*config.dump_dir / "nonfinite_state.dplw");
      }
      throw;
    }
    result.curve.push_back({it, epoch, loss});
    if (it % config.eval_interval == 0 || it == total) {
      const double p = mean_output_psnr(model, val_set);
      if (p > result.best_val_psnr) {
        result.best_val_psnr = p;
        result.best_iter = it;
        best = model.snapshot();
      }
    }
  }
  result.iterations_run = total;
  result.epochs_run = epoch + 1;
  model.restore(best);
  result.model = std::move(model);
  return result;
}

std::string loss_curve_csv(const std::vector<LossRow>& curve) {
  std::ostringstream os;
  os << "iter,l_n,l_c,l_f,l_o\n";
  for (const auto& r : curve) {
    os << r.iter << ',' << format_number(r.loss.l_n) << ',' << format_number(r.loss.l_c) << ','
       << format_number(r.loss.l_f) << ',' << format_number(r.loss.l_o) << '\n';
  }
  return os.str();
}

void write_loss_curve(const std::filesystem::path& path, const std::vector<LossRow>& curve) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << loss_curve_csv(curve);
  if (!out) throw IoError("write failed: " + path.string());
}

}  // namespace dplab
