#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "entire/artifact.hpp"
#include "entire/constructor.hpp"
#include "entire/verifier.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kVerifyFailed = 1;
constexpr int kAbort = 2;
constexpr int kIo = 3;
constexpr int kUsage = 64;
constexpr int kMalformed = 65;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

int default_depth() {
  const char* env = std::getenv("ENTIRE_DEPTH");
  if (!env) return entire::kDefaultDepth;
  try {
    return std::stoi(env);
  } catch (const std::exception&) {
    throw UsageError("ENTIRE_DEPTH is not an integer");
  }
}

void check_depth(int depth) {
  if (depth < 1 || depth > entire::kMaxDepth) throw UsageError("depth must lie in [1, 20]");
}

entire::ConstructionState load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw entire::MalformedArtifact("cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return entire::parse_artifact(ss.str());
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out << text;
  if (!out.flush()) throw IoError("write to " + path + " failed");
}

int stage_of(const entire::ConstructionState& st, int m) {
  if (m == 0) return st.n;
  if (m < 1 || m > st.n) throw UsageError("m must lie in [1, " + std::to_string(st.n) + "]");
  return m;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Truncations of entire functions with f(X) = Y and f^-1(Y) = X"};
  app.require_subcommand(1);

  int steps = 1;
  std::uint64_t seed = 0;
  std::string r = "1";
  std::string set_x = "qi";
  std::string set_y = "qi";
  int depth = 0;
  std::string out_path = "f.json";
  bool allow_zero_r = false;
  auto* construct = app.add_subcommand("construct", "build f_1..f_steps and write the artifact");
  construct->add_option("--steps", steps, "number of stages")->required();
  construct->add_option("--seed", seed, "branching seed");
  construct->add_option("--r", r, "f_1 = z + r, rational");
  construct->add_option("--set-x", set_x, "domain set identifier");
  construct->add_option("--set-y", set_y, "target set identifier");
  construct->add_option("--depth", depth, "certification depth [1, 20]");
  construct->add_option("--out", out_path, "artifact path");
  construct->add_flag("--allow-zero-r", allow_zero_r, "permit r = 0");

  std::string in_path;
  std::string report_path;
  auto* verify = app.add_subcommand("verify", "re-verify every stage of an artifact");
  verify->add_option("artifact", in_path)->required();
  verify->add_option("--depth", depth, "certification depth [1, 20]");
  verify->add_option("--report", report_path, "report path (default <artifact>.report.json)");

  std::string z_text;
  int m = 0;
  auto* eval = app.add_subcommand("eval", "print f_m(z) exactly");
  eval->add_option("artifact", in_path)->required();
  eval->add_option("--z", z_text, "Gaussian rational, e.g. 1/2-3i")->required();
  eval->add_option("--m", m, "stage (default: last)");

  std::string lo = "-4";
  std::string hi = "4";
  int grid = 64;
  std::string csv_path = "-";
  auto* plot = app.add_subcommand("plot", "CSV of |f_m| on a square grid");
  plot->add_option("artifact", in_path)->required();
  plot->add_option("--m", m, "stage (default: last)");
  plot->add_option("--lo", lo, "lower corner of the square");
  plot->add_option("--hi", hi, "upper corner of the square");
  plot->add_option("--grid", grid, "points per side");
  plot->add_option("--out", csv_path, "CSV path, '-' for stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (depth == 0) depth = default_depth();
    check_depth(depth);

    if (*construct) {
      if (steps < 1) throw UsageError("--steps must be at least 1");
      entire::ConstructionConfig cfg;
      try {
        cfg.r = entire::parse_rational(r);
      } catch (const std::invalid_argument& e) {
        throw UsageError(std::string("--r: ") + e.what());
      }
      cfg.seed = seed;
      cfg.steps = steps;
      cfg.depth = depth;
      cfg.set_x = set_x;
      cfg.set_y = set_y;
      cfg.allow_zero_r = allow_zero_r;
      entire::ConstructionState st;
      try {
        st = entire::run(cfg);
      } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
      } catch (const std::exception& e) {
        std::cerr << "construction aborted: " << e.what() << "\n";
        return kAbort;
      }
      write_file(out_path, entire::serialize(st));
      std::cout << out_path << "\n";
      return kOk;
    }

    if (*verify) {
      entire::ConstructionState st = load(in_path);
      entire::VerifyOptions opts;
      opts.depth = depth;
      entire::VerificationReport rep = entire::verify_all(st, opts);
      if (report_path.empty()) report_path = in_path + ".report.json";
      write_file(report_path, rep.to_json().dump(2) + "\n");
      std::cout << report_path << "\n";
      if (!rep.pass) {
        std::cerr << "verification failed: " << rep.first_failure << "\n";
        return kVerifyFailed;
      }
      return kOk;
    }

    if (*eval) {
      entire::ConstructionState st = load(in_path);
      entire::GaussianRational z;
      try {
        z = entire::parse_gaussian(z_text);
      } catch (const std::invalid_argument& e) {
        throw UsageError(std::string("--z: ") + e.what());
      }
      const int stage = stage_of(st, m);
      std::cout << entire::to_string(entire::eval_exact(entire::truncation(st, stage), z)) << "\n";
      return kOk;
    }

    if (*plot) {
      entire::ConstructionState st = load(in_path);
      const int stage = stage_of(st, m);
      if (grid < 2) throw UsageError("--grid must be at least 2");
      entire::Rational a;
      entire::Rational b;
      try {
        a = entire::parse_rational(lo);
        b = entire::parse_rational(hi);
      } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
      }
      if (!(a < b)) throw UsageError("--lo must be below --hi");
      const entire::QPolynomial f = entire::truncation(st, stage);
      std::ostringstream csv;
      csv << "re,im,abs\n";
      for (int y = 0; y < grid; ++y) {
        for (int x = 0; x < grid; ++x) {
          entire::GaussianRational z(a + (b - a) * entire::Rational(x, grid - 1), a + (b - a) * entire::Rational(y, grid - 1));
          entire::GaussianRational v = entire::eval_exact(f, z);
          csv << z.re.get_d() << "," << z.im.get_d() << "," << std::sqrt(entire::gnorm(v).get_d()) << "\n";
        }
      }
      if (csv_path == "-") {
        std::cout << csv.str();
      } else {
        write_file(csv_path, csv.str());
      }
      return kOk;
    }
  } catch (const UsageError& e) {
    std::cerr << "usage: " << e.what() << "\n";
    return kUsage;
  } catch (const entire::MalformedArtifact& e) {
    std::cerr << "malformed artifact: " << e.what() << "\n";
    return kMalformed;
  } catch (const IoError& e) {
    std::cerr << "i/o: " << e.what() << "\n";
    return kIo;
  }
  return kUsage;
}
