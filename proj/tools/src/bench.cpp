#include "dplab/cli/bench.hpp"

#include <algorithm>
#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <set>
#include <sstream>

#include "dplab/cli/commands.hpp"
#include "dplab/cli/manifest.hpp"
#include "dplab/errors.hpp"
#include "dplab/image_io.hpp"
#include "dplab/phantom.hpp"
#include "dplab/report.hpp"

namespace dplab::cli {

namespace pt = boost::property_tree;

namespace {

std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t\r");
  const auto e = s.find_last_not_of(" \t\r");
  return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream is(s);
  std::string item;
  while (std::getline(is, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

template <typename T>
T number(const std::string& section, const std::string& key, const std::string& text) {
  std::istringstream is(text);
  T v{};
  is >> v;
  if (!is || !(is >> std::ws).eof()) {
    throw UsageError("[" + section + "] " + key + ": expected a number, got '" + text + "'");
  }
  return v;
}

fs::path resolve_path(const std::string& value, const fs::path& base) {
  const fs::path p(value);
  return p.is_absolute() || base.empty() ? p : base / p;
}

void parse_data(BenchConfig& c, const pt::ptree& s, const fs::path& base) {
  for (const auto& [key, node] : s) {
    const std::string v = node.data();
    if (key == "dir") c.dataset = resolve_path(v, base);
    else if (key == "count") c.count = number<int>("data", key, v);
    else if (key == "size") c.size = number<int>("data", key, v);
    else if (key == "ellipses") c.ellipses = number<int>("data", key, v);
    else if (key == "texture") c.texture = number<double>("data", key, v);
    else throw UsageError("[data] unknown key '" + key + "'");
  }
}

void parse_models(BenchConfig& c, const pt::ptree& s) {
  for (const auto& [key, node] : s) {
    const std::string v = node.data();
    if (key == "list") c.models = split_list(v);
    else if (key == "iters") c.train.iterations = number<long>("models", key, v);
    else if (key == "epochs") c.train.epochs = number<long>("models", key, v);
    else if (key == "batch") c.train.batch_size = number<int>("models", key, v);
    else if (key == "lr") c.train.lr = number<double>("models", key, v);
    else if (key == "depth") c.train.depth = number<int>("models", key, v);
    else if (key == "base") c.train.base_channels = number<int>("models", key, v);
    else if (key == "train_ratio") c.train.train_ratio = number<double>("models", key, v);
    else if (key == "eval_interval") c.train.eval_interval = number<long>("models", key, v);
    else throw UsageError("[models] unknown key '" + key + "'");
  }
  for (const auto& m : c.models) {
    try {
      parse_model_kind(m);
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
  }
}

}  // namespace

BenchConfig parse_bench_config(std::istream& in, const fs::path& base_dir) {
  pt::ptree tree;
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw UsageError(std::string("config: ") + e.what());
  }
  BenchConfig c;
  std::vector<std::string> families{"gaussian"};
  std::map<std::string, std::vector<std::pair<std::string, double>>> noise_overrides;

  for (const auto& [name, node] : tree) {
    if (node.empty()) {
      const std::string v = node.data();
      if (name == "seed") c.seed = number<std::uint64_t>("", name, v);
      else if (name == "out") c.out = resolve_path(v, base_dir);
      else throw UsageError("unknown top-level key '" + name + "'");
      continue;
    }
    if (name == "data") {
      parse_data(c, node, base_dir);
    } else if (name == "noise") {
      for (const auto& [key, val] : node) {
        if (key != "families") throw UsageError("[noise] unknown key '" + key + "'");
        families = split_list(val.data());
      }
    } else if (name.rfind("noise:", 0) == 0) {
      for (const auto& [key, val] : node) {
        noise_overrides[name.substr(6)].emplace_back(key, number<double>(name, key, val.data()));
      }
    } else if (name == "algorithms") {
      for (const auto& [key, val] : node) {
        if (key == "list") c.algorithms = split_list(val.data());
        else if (key == "sigma") c.sigma = number<double>(name, key, val.data());
        else throw UsageError("[algorithms] unknown key '" + key + "'");
      }
    } else if (name.rfind("param:", 0) == 0) {
      auto& overrides = c.params[name.substr(6)];
      for (const auto& [key, val] : node) overrides[key] = number<double>(name, key, val.data());
    } else if (name == "models") {
      parse_models(c, node);
    } else {
      throw UsageError("unknown section [" + name + "]");
    }
  }

  if (families.empty()) throw UsageError("[noise] families must list at least one family");
  std::set<std::string> seen;
  for (const auto& f : families) {
    if (!seen.insert(f).second) throw UsageError("noise family '" + f + "' listed twice");
    try {
      NoiseSpec spec = NoiseSpec::defaults(parse_noise_family(f));
      for (const auto& [k, v] : noise_overrides[f]) spec.set_param(k, v);
      c.noises.push_back(spec);
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
  }
  for (const auto& [f, _] : noise_overrides) {
    if (!seen.count(f)) throw UsageError("[noise:" + f + "] does not match a listed family");
  }
  for (const auto& a : c.algorithms) {
    if (a != kNoisyReference && !is_classic_algorithm(a)) throw UsageError("unknown algorithm '" + a + "'");
  }
  for (const auto& [a, overrides] : c.params) {
    if (!is_classic_algorithm(a)) throw UsageError("[param:" + a + "] names an unknown algorithm");
    const auto keys = classic_param_keys(a);
    for (const auto& [k, _] : overrides) {
      if (std::find(keys.begin(), keys.end(), k) == keys.end()) {
        throw UsageError("[param:" + a + "] unknown key '" + k + "'");
      }
    }
  }
  if (c.algorithms.empty() && c.models.empty()) throw UsageError("config lists no algorithms or models");
  if (c.count < 1) throw UsageError("[data] count must be at least 1");
  c.train.seed = c.seed;
  try {
    c.train.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  return c;
}

BenchConfig load_bench_config(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot open config " + path.string());
  return parse_bench_config(in, path.parent_path());
}

namespace {

std::vector<std::pair<std::string, Image>> clean_images(const BenchConfig& c) {
  std::vector<std::pair<std::string, Image>> out;
  if (c.dataset) {
    for (const auto& e : discover_images(*c.dataset)) out.emplace_back(e.id, load_raw(e.path));
    if (out.empty()) throw UsageError("no images in " + c.dataset->string());
    return out;
  }
  for (int i = 0; i < c.count; ++i) {
    char id[32];
    std::snprintf(id, sizeof id, "phantom_%04d", i);
    out.emplace_back(id, gen_phantom(PhantomSpec(c.size, c.ellipses, static_cast<float>(c.texture),
                                                 c.seed + static_cast<std::uint64_t>(i))));
  }
  return out;
}

void write_table(const fs::path& path, const std::vector<std::string>& rows, const std::vector<std::string>& cols,
                 const std::map<std::pair<std::string, std::string>, std::string>& cells) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << "algorithm";
  for (const auto& c : cols) out << ',' << c;
  out << '\n';
  for (const auto& r : rows) {
    out << r;
    for (const auto& c : cols) out << ',' << cells.at({r, c});
    out << '\n';
  }
  if (!out) throw IoError("write failed: " + path.string());
}

}  // namespace

int cmd_bench(const BenchConfig& c, std::ostream& log) {
  const auto clean = clean_images(c);
  std::vector<std::string> ids;
  for (const auto& [id, _] : clean) ids.push_back(id);

  // Learned models hold out a split; every cell is then scored on it.
  std::vector<std::string> scored = ids;
  if (!c.models.empty()) {
    const auto split = train_split(c.train, ids);
    if (!split.val.empty()) scored = split.val;
  }

  std::vector<std::string> rows;
  for (const auto& a : c.algorithms) rows.push_back(a);
  for (const auto& m : c.models) rows.push_back(std::string(to_string(parse_model_kind(m))));
  std::vector<std::string> cols;
  for (const auto& n : c.noises) cols.emplace_back(to_string(n.family()));

  std::map<std::pair<std::string, std::string>, std::string> psnr_cells, ssim_cells;
  MetricReport detail;
  bool failed = false;

  for (const auto& spec : c.noises) {
    const std::string noise(to_string(spec.family()));
    std::vector<PairSample> pairs;
    for (std::size_t i = 0; i < clean.size(); ++i) {
      NoiseSpec s = spec;
      s.seed = c.seed + i;
      pairs.push_back({clean[i].first, apply_noise(clean[i].second, s), clean[i].second, noise});
    }
    const auto eval_set = select(pairs, scored);

    auto run_cell = [&](const std::string& row, auto&& body) {
      MetricReport cell;
      try {
        body(cell);
        const auto agg = cell.aggregates();
        const MetricRow* mean = nullptr;
        for (const auto& r : agg) {
          if (r.algorithm == row) mean = &r;
        }
        if (!mean) throw std::runtime_error("no rows produced");
        psnr_cells[{row, noise}] = format_number(mean->psnr_db);
        ssim_cells[{row, noise}] = format_number(mean->ssim);
        for (const auto& r : cell.rows()) {
          if (r.algorithm == row) detail.add(r);
        }
      } catch (const std::exception& e) {
        failed = true;
        psnr_cells[{row, noise}] = ssim_cells[{row, noise}] = "error";
        log << "cell " << row << " x " << noise << " failed: " << e.what() << '\n';
      }
    };

    for (const auto& algo : c.algorithms) {
      run_cell(algo, [&](MetricReport& cell) {
        const auto it = c.params.find(algo);
        const ParamOverrides none;
        for (const auto& s : eval_set) {
          const Image out = algo == kNoisyReference
                                ? s.noisy
                                : run_classic(algo, s.noisy, c.sigma, it == c.params.end() ? none : it->second);
          cell.add(s.id, algo, noise, s.clean, out);
        }
      });
    }
    for (const auto& m : c.models) {
      TrainConfig tc = c.train;
      tc.model = parse_model_kind(m);
      run_cell(std::string(to_string(tc.model)), [&](MetricReport& cell) {
        const auto result = train(tc, pairs);
        cell = evaluate(result.model, eval_set);
      });
    }
    log << "finished noise " << noise << '\n';
  }

  std::error_code ec;
  fs::create_directories(c.out, ec);
  if (ec || !fs::is_directory(c.out)) throw IoError("cannot create directory " + c.out.string());
  write_table(c.out / "results_psnr.csv", rows, cols, psnr_cells);
  write_table(c.out / "results_ssim.csv", rows, cols, ssim_cells);
  detail.write_csv(c.out / "results_detail.csv");
  log << "wrote " << rows.size() << "x" << cols.size() << " tables to " << c.out.string() << '\n';
  return failed ? kExitPartial : kExitOk;
}

}  // namespace dplab::cli
