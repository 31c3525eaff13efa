// Command-line front end: build, verify, decode, bounds, bench and the
// application codecs.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "superselect/superselect.hpp"

namespace ss = superselect;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailed = 1;
constexpr int kExitUsage = 2;

// FNV-1a over the file bytes; identifies inputs in the run manifest.
std::string digest_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return "-";
  std::uint64_t h = 0xcbf29ce484222325ULL;
  char ch;
  while (in.get(ch)) {
    h ^= static_cast<unsigned char>(ch);
    h *= 0x100000001b3ULL;
  }
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << h;
  return os.str();
}

struct Manifest {
  std::string command;
  std::vector<std::string> inputs;
  std::string seed = "-";
  double seconds = 0.0;
  std::string output = "-";
  std::string verdict = "-";
  std::string path;  // empty: standard error

  void emit() const {
    std::ostringstream line;
    line << command << '\t';
    for (std::size_t i = 0; i < inputs.size(); ++i) line << (i ? "," : "") << inputs[i];
    if (inputs.empty()) line << '-';
    line << '\t' << seed << '\t' << std::fixed << std::setprecision(6) << seconds << '\t' << output << '\t'
         << verdict << '\n';
    if (path.empty()) {
      std::cerr << line.str();
    } else {
      std::ofstream out(path, std::ios::app);
      out << line.str();
    }
  }
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

ss::BitMatrix build_matrix(const ss::SuperSelectorSpec& spec, const std::string& method, std::uint64_t seed,
                           std::size_t max_attempts, bool verify, std::size_t* attempts) {
  ss::DerandOptions options;
  options.verify = verify;
  *attempts = 1;
  if (method == "random") {
    auto result = ss::construct_randomized(spec, seed, max_attempts);
    *attempts = result.attempts;
    return std::move(result.matrix);
  }
  if (method == "stacked") return ss::construct_stacked(spec, options);
  return ss::construct_derandomized(spec, options);
}

std::vector<std::size_t> parse_list(const std::string& text) {
  std::vector<std::size_t> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (item.empty()) continue;
    std::size_t pos = 0;
    const auto value = std::stoull(item, &pos);
    if (pos != item.size()) throw ss::input_error("bad list element '" + item + "'");
    out.push_back(value);
  }
  return out;
}

std::string set_field(const ss::ColumnSet& s) { return s.empty() ? "-" : s.to_string(); }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Construct, verify and apply (p, v, n)-superselectors"};
  app.require_subcommand(1);
  std::string manifest_path;
  app.add_option("--manifest", manifest_path, "Append the run manifest line here instead of standard error");

  // build
  std::string spec_path, out_path, method = "derand", verify_flag = "on";
  std::uint64_t seed = 1;
  std::size_t max_attempts = 100;
  auto* build = app.add_subcommand("build", "Construct a superselector for a spec file");
  build->add_option("--spec", spec_path, "Spec file")->required();
  build->add_option("--method", method, "Construction method")->check(CLI::IsMember({"random", "derand", "stacked"}));
  build->add_option("--seed", seed, "Seed for --method random");
  build->add_option("--max-attempts", max_attempts, "Attempts for --method random")->check(CLI::PositiveNumber);
  build->add_option("--out", out_path, "Output matrix file")->required();
  build->add_option("--verify", verify_flag, "Brute-force check the output")->check(CLI::IsMember({"on", "off"}));

  // verify
  std::string matrix_path;
  auto* verify = app.add_subcommand("verify", "Check a matrix against a spec by exhaustive enumeration");
  verify->add_option("--matrix", matrix_path, "Matrix file")->required();
  verify->add_option("--spec", spec_path, "Spec file")->required();

  // decode
  std::string mode = "union", obs_path;
  std::size_t e0 = 0, e1 = 0;
  auto* decode = app.add_subcommand("decode", "Identify columns from an observation vector");
  decode->add_option("--matrix", matrix_path, "Matrix file")->required();
  decode->add_option("--spec", spec_path, "Spec file")->required();
  decode->add_option("--mode", mode, "Observation kind")->check(CLI::IsMember({"union", "additive", "approx"}));
  decode->add_option("--obs", obs_path, "Observation vector, one integer per line")->required();
  decode->add_option("--e0", e0, "False-positive budget (approx)");
  decode->add_option("--e1", e1, "False-negative budget (approx)");

  // bounds
  auto* bounds = app.add_subcommand("bounds", "Print the size bounds for a spec");
  bounds->add_option("--spec", spec_path, "Spec file")->required();

  // bench
  std::size_t bench_p = 2, reps = 0;
  std::string n_list = "8,12,16,20";
  double min_time = 0.2;
  auto* bench = app.add_subcommand("bench", "Time construction over a range of n");
  bench->add_option("--method", method, "Construction method")->check(CLI::IsMember({"random", "derand", "stacked"}));
  bench->add_option("--p", bench_p, "Spec (n, p, (1..p))")->check(CLI::PositiveNumber);
  bench->add_option("--n", n_list, "Comma-separated values of n");
  bench->add_option("--reps", reps, "Fixed repetitions per n (default: repeat for --min-time seconds)");
  bench->add_option("--min-time", min_time, "Seconds to spend per n when --reps is not given");
  bench->add_option("--seed", seed, "Seed for --method random");

  // compression
  std::size_t comp_p = 1;
  std::string in_path;
  auto* compress = app.add_subcommand("compress", "Compress a sparse binary vector");
  auto* decompress = app.add_subcommand("decompress", "Recover a vector from its compressed word");
  for (auto* sub : {compress, decompress}) {
    sub->add_option("--matrix", matrix_path, "(2p, p+1, n)-selector matrix file")->required();
    sub->add_option("--p", comp_p, "Sparsity bound")->required()->check(CLI::PositiveNumber);
    sub->add_option("--in", in_path, "Input bit file, one bit per line")->required();
    sub->add_option("--out", out_path, "Output bit file")->required();
  }

  // monotone encodings
  std::size_t me_n = 0, me_k = 0;
  std::string set_text, code_text;
  auto* me_encode = app.add_subcommand("me-encode", "Monotone encoding of a set");
  auto* me_decode = app.add_subcommand("me-decode", "Invert a monotone encoding");
  for (auto* sub : {me_encode, me_decode}) {
    sub->add_option("--n", me_n, "Universe size")->required();
    sub->add_option("--k", me_k, "Maximum set size")->required()->check(CLI::PositiveNumber);
  }
  me_encode->add_option("--set", set_text, "Comma-separated members")->required();
  me_decode->add_option("--code", code_text, "Codeword as a 0/1 string")->required();

  // multi-user tracing
  std::size_t mut_r = 1, mut_k = 1;
  auto* mut = app.add_subcommand("mut-decode", "Identify users from a union on an MUT_k(r) matrix");
  mut->add_option("--matrix", matrix_path, "Matrix file")->required();
  mut->add_option("--r", mut_r, "Maximum number of active users")->required();
  mut->add_option("--k", mut_k, "Guaranteed identifications")->required();
  mut->add_option("--obs", obs_path, "Observation vector, one bit per line")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  Manifest manifest;
  manifest.path = manifest_path;
  const auto start = Clock::now();

  try {
    if (*build) {
      manifest.command = "build";
      manifest.inputs = {"spec:" + digest_file(spec_path)};
      manifest.seed = method == "random" ? std::to_string(seed) : "-";
      manifest.output = out_path;
      const auto spec = ss::io::read_spec(spec_path);
      std::size_t attempts = 0;
      const bool check = verify_flag == "on";
      ss::BitMatrix m;
      try {
        m = build_matrix(spec, method, seed, max_attempts, check, &attempts);
      } catch (const ss::construction_failure& e) {
        manifest.seconds = seconds_since(start);
        manifest.verdict = "failed";
        manifest.emit();
        std::cerr << "build: " << e.what() << '\n';
        std::cout << "failed attempts=" << e.attempts << '\n';
        return kExitFailed;
      } catch (const ss::precision_fault& e) {
        manifest.seconds = seconds_since(start);
        manifest.verdict = "failed";
        manifest.emit();
        std::cerr << "build: " << e.what() << '\n';
        std::cout << "failed precision-fault\n";
        return kExitFailed;
      }
      // the random method only returns matrices that already passed the check
      ss::io::write_matrix(m, out_path);
      manifest.seconds = seconds_since(start);
      manifest.verdict = check ? "verified" : "unverified";
      manifest.emit();
      std::cout << "ok rows=" << m.rows() << " cols=" << m.cols() << " method=" << method << " attempts=" << attempts
                << " verified=" << (check ? "yes" : "no") << '\n';
      return kExitOk;
    }

    if (*verify) {
      const auto m = ss::io::read_matrix(matrix_path);
      const auto spec = ss::io::read_spec(spec_path);
      if (spec.n != m.cols()) throw ss::input_error("spec n differs from matrix column count");
      for (std::size_t i = 1; i <= spec.p; ++i) {
        if (spec.level(i) == 0) continue;
        if (auto bad = ss::find_selector_violation(m, i, spec.level(i))) {
          std::cout << "fail level=" << i << " subset=" << bad->to_string() << '\n';
          return kExitFailed;
        }
      }
      std::cout << "ok\n";
      return kExitOk;
    }

    if (*decode) {
      manifest.command = "decode";
      manifest.inputs = {"matrix:" + digest_file(matrix_path), "spec:" + digest_file(spec_path),
                         "obs:" + digest_file(obs_path)};
      const auto m = ss::io::read_matrix(matrix_path);
      const auto spec = ss::io::read_spec(spec_path);
      const auto obs = ss::io::read_vector(obs_path);
      std::ostringstream line;
      if (mode == "additive") {
        ss::IntVector s(obs.begin(), obs.end());
        try {
          line << "identified=" << set_field(ss::additive_decode(m, spec, s));
        } catch (const ss::inconsistent_input& e) {
          manifest.seconds = seconds_since(start);
          manifest.verdict = "inconsistent";
          manifest.emit();
          std::cerr << "decode: " << e.what() << '\n';
          std::cout << "inconsistent\n";
          return kExitFailed;
        }
      } else if (mode == "approx") {
        const auto r = ss::approx_decode(m, spec, ss::io::to_bool_vector(obs), e0, e1);
        line << "low=" << set_field(r.low) << " high=" << set_field(r.high);
      } else {
        const auto r = ss::identify_from_union(m, spec, ss::io::to_bool_vector(obs));
        line << "identified=" << set_field(r.identified) << " candidates=" << set_field(r.candidates)
             << " spurious=" << r.spurious_bound;
      }
      manifest.seconds = seconds_since(start);
      manifest.verdict = "decoded";
      manifest.emit();
      std::cout << line.str() << '\n';
      return kExitOk;
    }

    if (*bounds) {
      const auto spec = ss::io::read_spec(spec_path);
      std::size_t selector = 0;
      for (std::size_t j = 1; j <= spec.p; ++j)
        if (spec.level(j) > 0 && j < spec.n)
          selector = std::max(selector, ss::selector_upper_bound(j, spec.level(j), spec.n).m);
      std::cout << "upper=" << ss::superselector_upper_bound(spec).m << '\n'
                << "lower=" << ss::superselector_lower_bound(spec).m << '\n'
                << "threshold=" << ss::derand_threshold(spec) << '\n'
                << "selector=" << selector << '\n';
      return kExitOk;
    }

    if (*bench) {
      const auto ns = parse_list(n_list);
      std::vector<double> xs, ys;
      for (std::size_t n : ns) {
        std::vector<std::size_t> v(bench_p);
        for (std::size_t i = 0; i < bench_p; ++i) v[i] = i + 1;
        const ss::SuperSelectorSpec spec(n, v);
        std::vector<double> samples;
        std::size_t rows = 0, attempts = 0;
        const auto begin = Clock::now();
        while (reps ? samples.size() < reps : (samples.size() < 3 || seconds_since(begin) < min_time)) {
          const auto t0 = Clock::now();
          rows = build_matrix(spec, method, seed, 1000, false, &attempts).rows();
          samples.push_back(seconds_since(t0));
        }
        std::sort(samples.begin(), samples.end());
        const double median = samples[samples.size() / 2];
        xs.push_back(std::log(static_cast<double>(n)));
        ys.push_back(std::log(median));
        std::cout << "n=" << n << " rows=" << rows << " reps=" << samples.size() << " seconds=" << std::setprecision(6)
                  << median << '\n';
      }
      if (xs.size() >= 2) {
        const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
        const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / static_cast<double>(ys.size());
        double sxy = 0, sxx = 0;
        for (std::size_t i = 0; i < xs.size(); ++i) {
          sxy += (xs[i] - mx) * (ys[i] - my);
          sxx += (xs[i] - mx) * (xs[i] - mx);
        }
        std::cout << "slope=" << std::setprecision(4) << sxy / sxx << '\n';
      }
      return kExitOk;
    }

    if (*compress || *decompress) {
      const auto m = ss::io::read_matrix(matrix_path);
      const auto input = ss::io::read_vector(in_path);
      if (*compress) {
        const auto word = ss::compress(m, comp_p, ss::io::to_bool_vector(input));
        ss::io::write_vector(ss::io::from_bool_vector(word.bits()), out_path);
        std::cout << "ok bits=" << word.bits().size() << '\n';
      } else {
        const auto word = ss::CompressedWord::from_bits(ss::io::to_bool_vector(input), m.rows(), comp_p);
        const auto x = ss::decompress(m, comp_p, word);
        ss::io::write_vector(ss::io::from_bool_vector(x), out_path);
        std::cout << "ok support=" << set_field(ss::ColumnSet::from_mask(x)) << '\n';
      }
      return kExitOk;
    }

    if (*me_encode) {
      const ss::ColumnSet s(parse_list(set_text));
      std::cout << ss::monotone_encode(me_n, me_k, s).to_string() << '\n';
      return kExitOk;
    }

    if (*me_decode) {
      std::cout << "set=" << set_field(ss::monotone_decode(me_n, me_k, ss::BitVector::from_string(code_text))) << '\n';
      return kExitOk;
    }

    if (*mut) {
      manifest.command = "mut-decode";
      manifest.inputs = {"matrix:" + digest_file(matrix_path), "obs:" + digest_file(obs_path)};
      const auto m = ss::io::read_matrix(matrix_path);
      const auto spec = ss::mut_spec(mut_r, mut_k, m.cols());
      const auto r = ss::mut_decode(m, spec, ss::io::to_bool_vector(ss::io::read_vector(obs_path)));
      manifest.seconds = seconds_since(start);
      manifest.verdict = "decoded";
      manifest.emit();
      std::cout << "identified=" << set_field(r.identified) << " candidates=" << set_field(r.candidates) << '\n';
      return kExitOk;
    }
  } catch (const ss::input_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ss::parse_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFailed;
  }
  return kExitUsage;
}
