// Command-line front end: parse descriptors, run one operation, print a report.

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <iostream>
#include <thread>

#include "stackbr/errors.hpp"
#include "stackbr/io.hpp"

using namespace stackbr;

namespace {

struct Common {
  std::string format = "text";
  std::optional<long long> truncation;
  std::size_t budget = 1'000'000;
  bool allow_prime_to_p = false;
  bool timing = false;
  std::size_t jobs = 1;
};

void add_common(CLI::App* app, Common& c) {
  app->add_option("--format", c.format, "json or text")->check(CLI::IsMember({"json", "text"}));
  app->add_option("--truncation", c.truncation, "truncation level N for Q/Z")->check(CLI::PositiveNumber);
  app->add_option("--budget", c.budget, "maximum cochain copies per degree")->check(CLI::PositiveNumber);
  app->add_flag("--allow-prime-to-p", c.allow_prime_to_p, "replace wild mu_n by its prime-to-p part with a warning");
  app->add_flag("--timing", c.timing, "include wall time in the report");
}

RequestOptions request_options(const Common& c) {
  RequestOptions o;
  if (c.truncation) o.truncation = Integer(std::to_string(*c.truncation));
  o.budget = c.budget;
  o.allow_prime_to_p = c.allow_prime_to_p;
  return o;
}

std::pair<Report, int> timed(const std::string& op, const Json& input, const Common& c) {
  auto start = std::chrono::steady_clock::now();
  auto out = run_request_safely(op, input, request_options(c));
  if (c.timing)
    out.first.timing_ms =
        std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start).count();
  return out;
}

int emit(const std::vector<Report>& reports, const std::vector<int>& codes, bool batch, const Common& c) {
  if (c.format == "json") {
    if (batch) {
      Json arr = Json::array();
      for (const auto& r : reports) arr.push_back(to_json(r));
      std::cout << arr.dump(2) << "\n";
    } else {
      std::cout << render_json(reports[0]);
    }
  } else {
    for (std::size_t i = 0; i < reports.size(); ++i) {
      if (i) std::cout << "---\n";
      std::cout << render_text(reports[i]);
    }
  }
  return codes.empty() ? 0 : *std::max_element(codes.begin(), codes.end());
}

int run_one(const std::string& op, const Json& input, const Common& c) {
  auto [r, code] = timed(op, input, c);
  return emit({r}, {code}, false, c);
}

int run_batch(const std::string& op, const Json& inputs, const Common& c) {
  const std::size_t n = inputs.size();
  std::vector<Report> reports(n);
  std::vector<int> codes(n, 0);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) std::tie(reports[i], codes[i]) = timed(op, inputs[i], c);
  };
  std::vector<std::thread> pool;
  for (std::size_t k = 0; k < std::max<std::size_t>(1, std::min(c.jobs, n)); ++k) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  return emit(reports, codes, true, c);
}

int fail(const std::exception& e, const Common& c) {
  Report r;
  const auto* err = dynamic_cast<const Error*>(&e);
  r.error = ErrorInfo{err ? err->kind() : "ParseError", e.what()};
  return emit({r}, {exit_code_for(e)}, false, c);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Brauer and Picard groups of tame stacky curves"};
  app.require_subcommand(1);

  Common compute_opts;
  std::string input, op;
  auto* compute = app.add_subcommand("compute", "run an operation on a JSON descriptor");
  compute->add_option("--input", input, "JSON file, inline JSON, or - for stdin")->required();
  compute->add_option("--op", op, "operation")
      ->required()
      ->check(CLI::IsMember({"pic", "cl", "brauer", "brauerless", "cohomology", "faddeev", "extends", "filtration",
                             "catalogue"}));
  compute->add_option("--jobs", compute_opts.jobs, "worker threads for an array of inputs")->check(CLI::PositiveNumber);
  add_common(compute, compute_opts);

  Common cat_opts;
  std::string cat_name, cat_base;
  auto* catalogue = app.add_subcommand("catalogue", "Brauer group of a catalogued modular stack");
  catalogue->add_option("name", cat_name, "X1, Y1 or Y02")->required();
  catalogue->add_option("--base", cat_base, "base descriptor as JSON")->required();
  add_common(catalogue, cat_opts);

  Common coh_opts;
  std::string coh_group, coh_coeff = "Z";
  int coh_degree = 0;
  auto* cohomology = app.add_subcommand("cohomology", "H^n(G, M) with trivial action");
  cohomology->add_option("--group", coh_group, "group name or multiplication table as JSON")->required();
  cohomology->add_option("--coeff", coh_coeff, "Z or Z/n");
  cohomology->add_option("--degree", coh_degree, "degree n")->required()->check(CLI::Range(0, 16));
  add_common(cohomology, coh_opts);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  if (*compute) {
    Json in;
    try {
      in = load_json_argument(input);
    } catch (const std::exception& e) {
      return fail(e, compute_opts);
    }
    if (in.is_array()) return run_batch(op, in, compute_opts);
    return run_one(op, in, compute_opts);
  }
  if (*catalogue) {
    Json base;
    try {
      base = load_json_argument(cat_base);
    } catch (const std::exception& e) {
      return fail(e, cat_opts);
    }
    return run_one("catalogue", Json{{"name", cat_name}, {"base", base}}, cat_opts);
  }
  Json group = coh_group;
  if (!coh_group.empty() && coh_group[0] == '[') {
    try {
      group = load_json_argument(coh_group);
    } catch (const std::exception& e) {
      return fail(e, coh_opts);
    }
  }
  return run_one("cohomology", Json{{"group", group}, {"coeff", coh_coeff}, {"degree", coh_degree}}, coh_opts);
}
