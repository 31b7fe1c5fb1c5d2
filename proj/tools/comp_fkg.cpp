// comp_fkg: enumeration and verification campaigns over K_{n,r}.
// Exit codes: 0 all checks passed, 2 violation witness, 1 usage or input error.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "compfkg/commands.hpp"

using namespace compfkg;

namespace {

std::vector<Rational> parse_list(const std::string& text) {
  std::vector<Rational> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) out.push_back(parse_rational(item));
  return out;
}

void emit(const CommandResult& res, const std::string& out, const std::string& format) {
  const std::string text = format == "markdown" ? to_markdown(res.report) : dump(res.report);
  if (out == "-") {
    std::cout << text;
    return;
  }
  std::cout << res.summary << "\n";
  if (!out.empty()) {
    std::ofstream f(out, std::ios::binary);
    if (!f || !(f << text)) throw SchemaError("cannot write " + out);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Averaging inequalities on K_{n,r} and mixed (co)volumes"};
  app.require_subcommand(1);

  RunConfig cfg;
  cfg.enumeration_cap = enumeration_cap_from_env();
  std::string out, format = "json", d_list, exponent;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--seed", cfg.seed, "PRNG seed")->capture_default_str();
    sub->add_option("--out", out, "report path; '-' prints the report instead of the summary");
    sub->add_option("--format", format, "report format")->check(CLI::IsMember({"json", "markdown"}))->capture_default_str();
    sub->add_option("--threads", cfg.threads, "worker threads (0: all cores)");
    sub->add_option("--filter-cap", cfg.filter_cap, "maximum number of quotient filters")->capture_default_str();
    sub->add_option("--precision", cfg.precision_start, "starting MPFR precision in bits")->capture_default_str();
  };

  auto* en = app.add_subcommand("enumerate", "enumerate K_{n,r}, print sizes, export JSON or DOT");
  en->add_option("n", cfg.n)->required()->check(CLI::NonNegativeNumber);
  en->add_option("r", cfg.r)->required()->check(CLI::PositiveNumber);
  en->add_option("--dot", cfg.dot_path, "Hasse diagram of K_{n,r}");
  en->add_option("--quotient-dot", cfg.quotient_dot_path, "Hasse diagram of the quotient");
  en->add_option("--json", cfg.json_path, "lattice as JSON");
  common(en);

  auto* fkg = app.add_subcommand("verify-fkg", "correlation inequality campaigns");
  fkg->add_option("n", cfg.n)->required()->check(CLI::NonNegativeNumber);
  fkg->add_option("r", cfg.r)->required()->check(CLI::PositiveNumber);
  fkg->add_option("--mode", cfg.mode)->check(CLI::IsMember({"exhaustive", "random", "homogeneous"}))->capture_default_str();
  fkg->add_option("--d", d_list, "comma-separated d_1..d_r for the homogeneous instance");
  fkg->add_option("--budget", cfg.budget, "random instances (default 1000)");
  common(fkg);

  auto* geo = app.add_subcommand("verify-geometry", "mixed volume and covolume inequalities");
  geo->add_option("--check", cfg.check)
      ->required()
      ->check(CLI::IsMember({"af", "teissier", "product", "corollary1", "corollary2", "durfee", "jensen"}));
  auto* bodies = geo->add_option("--bodies", cfg.bodies_path, "polytopes JSON");
  auto* newton = geo->add_option("--newton", cfg.newton_path, "Newton polyhedra JSON");
  auto* table = geo->add_option("--table", cfg.table_path, "abstract (co)volume table JSON");
  bodies->excludes(newton)->excludes(table);
  newton->excludes(table);
  geo->add_option("--C", cfg.c_path, "weight function JSON on the inner lattice");
  geo->add_option("--weight", cfg.weight, "built-in weight")
      ->check(CLI::IsMember({"max-part", "multinomial", "constant"}))
      ->capture_default_str();
  geo->add_option("--kind", cfg.kind, "table kind")->check(CLI::IsMember({"volume", "covolume"}))->capture_default_str();
  geo->add_option("--exponent", exponent, "a,b,c for the three-body exponent inequality");
  geo->add_option("--inner-r", cfg.inner_r, "inner r for the corollaries (default: all bodies)");
  geo->add_option("--r", cfg.r, "bodies per random durfee instance");
  geo->add_option("--dim", cfg.dim, "ambient dimension of random instances")->check(CLI::Range(1, 3))->capture_default_str();
  geo->add_flag("--allow-rescale", cfg.allow_rescale, "scale bodies so all values are >= 1");
  geo->add_option("--budget", cfg.budget, "random instances when no file is given (default 100)");
  common(geo);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    CommandResult res;
    if (*en) {
      cfg.command = "enumerate";
      res = run_enumerate(cfg);
    } else if (*fkg) {
      cfg.command = "verify-fkg";
      if (!d_list.empty()) cfg.d = parse_list(d_list);
      res = run_verify_fkg(cfg);
    } else {
      cfg.command = "verify-geometry";
      if (!exponent.empty()) {
        auto v = parse_list(exponent);
        if (v.size() != 3) throw DomainError("--exponent needs a,b,c");
        std::array<long, 3> e{};
        for (int i = 0; i < 3; ++i) {
          if (v[static_cast<std::size_t>(i)].get_den() != 1) throw DomainError("--exponent needs integers");
          e[static_cast<std::size_t>(i)] = v[static_cast<std::size_t>(i)].get_num().get_si();
        }
        cfg.exponent = e;
      }
      res = run_verify_geometry(cfg);
    }
    emit(res, out, format);
    if (res.exit_code == 2) std::cerr << "violation witness found; see report\n";
    return res.exit_code;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
