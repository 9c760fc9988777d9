#include <algmix/acceptance.hpp>

#include <CLI11.hpp>

using namespace algmix;

namespace {

struct Common {
  bool json = false;
  unsigned threads = 0;
  unsigned resolved_threads() const { return threads ? threads : cli::default_threads(); }
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_flag("--json", c.json, "print one JSON document");
  cmd->add_option("--threads", c.threads, "worker threads (default: ALGMIX_THREADS or the core count)")->check(CLI::Range(1, 1024));
}

std::optional<SearchBox> optional_box(const std::string& text, std::size_t d) {
  if (text.empty()) return std::nullopt;
  return cli::parse_box(text, d);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"algmix: mixing questions for algebraic group actions"};
  app.require_subcommand(1);

  // analyze
  Common an_c;
  std::string an_file, an_box;
  unsigned an_kmax = 64;
  auto* analyze = app.add_subcommand("analyze", "quotient triviality, non-mixing elements, connectedness");
  analyze->add_option("system", an_file, "system presentation file")->required();
  analyze->add_option("--box", an_box, "group box for the non-mixing element search, lo:hi");
  analyze->add_option("--torsion-kmax", an_kmax, "largest k tried for u1^k = 1");
  add_common(analyze, an_c);

  // certify
  Common ce_c;
  std::string ce_file, ce_box, ce_window, ce_dil, ce_out = ".";
  cli::CertifyOptions ce;
  auto* certify = app.add_subcommand("certify", "search for non-mixing certificates of a given order");
  certify->add_option("system", ce_file, "system presentation file")->required();
  certify->add_option("--order,-r", ce.order, "order r >= 2")->required();
  certify->add_option("--box", ce_box, "shape box, lo:hi");
  certify->add_option("--window", ce_window, "coefficient window (characteristic p), lo:hi");
  certify->add_option("--dilations", ce_dil, "dilation set, comma separated");
  certify->add_option("--kmax", ce.kmax, "largest Frobenius exponent recorded");
  certify->add_option("--budget", ce.budget, "cell budget");
  certify->add_option("--max-per-cell", ce.max_per_cell, "certificates kept per search cell");
  certify->add_option("--coeff-height", ce.coeff_height, "rational dual: coefficient height");
  certify->add_option("--shift-height", ce.shift_height, "rational dual: shift height");
  certify->add_option("--family-last", ce.family_last, "rational dual: last family parameter");
  certify->add_option("--out", ce_out, "directory for certificate files");
  certify->add_flag("--no-write", "do not write certificate files");
  add_common(certify, ce_c);

  // verify
  Common ve_c;
  std::string ve_cert, ve_file;
  auto* verify = app.add_subcommand("verify", "replay a certificate against a presentation");
  verify->add_option("certificate", ve_cert, "certificate file")->required();
  verify->add_option("system", ve_file, "system presentation file")->required();
  add_common(verify, ve_c);

  // simulate
  Common si_c;
  std::string si_file, si_shifts, si_window;
  std::vector<std::string> si_sets;
  cli::SimulateOptions si;
  auto* simulate = app.add_subcommand("simulate", "exact and Monte Carlo cylinder correlations");
  simulate->add_option("system", si_file, "system presentation file")->required();
  simulate->add_option("--set", si_sets, "cylinder set x,y=v;x,y=v (one, or one per shift)")->required();
  simulate->add_option("--shifts", si_shifts, "shifts x,y;x,y;...")->required();
  simulate->add_option("--samples,-N", si.samples, "Monte Carlo samples");
  simulate->add_option("--seed", si.seed, "seed");
  simulate->add_option("--window", si_window, "window box, lo:hi");
  simulate->add_option("--dump", si.dump, "print this many sampled configurations");
  add_common(simulate, si_c);

  // uniteq
  Common un_c;
  cli::UniteqOptions un;
  auto* uniteq = app.add_subcommand("uniteq", "solve a_1 x_1 + ... + a_n x_n = 1 in a finitely generated group");
  uniteq->add_option("--field", un.field, "monic modulus, coefficients lowest degree first");
  uniteq->add_option("--coeffs", un.coeffs, "coefficients a_i; [c0,c1,..] for coordinates")->required();
  uniteq->add_option("--gens", un.gens, "group generators (default: none)");
  uniteq->add_option("--box", un.box, "exponent bound");
  uniteq->add_option("--budget", un.budget, "step budget");
  add_common(uniteq, un_c);

  // report
  Common re_c;
  std::string re_file, re_box, re_window, re_dil, re_mbox;
  ReportOptions re;
  auto* report = app.add_subcommand("report", "orders of mixing: certificates and exhausted regions");
  report->add_option("system", re_file, "system presentation file")->required();
  report->add_option("--rmax", re.rmax, "largest order tried");
  report->add_option("--kmax", re.kmax, "largest Frobenius exponent recorded");
  report->add_option("--box", re_box, "shape box, lo:hi");
  report->add_option("--window", re_window, "coefficient window, lo:hi");
  report->add_option("--dilations", re_dil, "dilation set, comma separated");
  report->add_option("--mixing-box", re_mbox, "box for the non-mixing element search");
  report->add_option("--budget", re.budget, "cell budget");
  add_common(report, re_c);

  // suite
  Common su_c;
  auto* suite = app.add_subcommand("suite", "run the acceptance suite");
  add_common(suite, su_c);

  CLI11_PARSE(app, argc, argv);

  try {
    if (analyze->parsed()) {
      auto F = load_system(an_file);
      cli::AnalyzeOptions o;
      o.mixing_box = optional_box(an_box, F.system.group().rank());
      o.torsion_kmax = an_kmax;
      o.json = an_c.json;
      return cli::cmd_analyze(F, o, std::cout, std::cerr);
    }
    if (certify->parsed()) {
      auto F = load_system(ce_file);
      const auto d = F.system.group().rank();
      ce.box = optional_box(ce_box, d);
      ce.window = optional_box(ce_window, d);
      ce.dilations = cli::detail::long_list(ce_dil, "--dilations");
      ce.out_dir = ce_out;
      ce.write = certify->count("--no-write") == 0;
      ce.prefix = F.name.empty() ? "certificate" : F.name;
      for (auto& ch : ce.prefix)
        if (!std::isalnum(static_cast<unsigned char>(ch)) && ch != '-' && ch != '_') ch = '_';
      ce.json = ce_c.json;
      ce.threads = ce_c.resolved_threads();
      return cli::cmd_certify(F, ce, std::cout, std::cerr);
    }
    if (verify->parsed()) {
      auto F = load_system(ve_file);
      cli::VerifyOptions o;
      o.json = ve_c.json;
      return cli::cmd_verify(F, read_file(ve_cert), ve_cert, o, std::cout, std::cerr);
    }
    if (simulate->parsed()) {
      auto F = load_system(si_file);
      const auto d = F.system.group().rank();
      for (const auto& s : si_sets) si.sets.push_back(cli::parse_pins(s));
      si.shifts = cli::parse_shifts(si_shifts, d);
      si.window = optional_box(si_window, d);
      si.json = si_c.json;
      si.threads = si_c.resolved_threads();
      return cli::cmd_simulate(F, si, std::cout, std::cerr);
    }
    if (uniteq->parsed()) {
      un.json = un_c.json;
      return cli::cmd_uniteq(un, std::cout, std::cerr);
    }
    if (report->parsed()) {
      auto F = load_system(re_file);
      const auto d = F.system.group().rank();
      re.box = optional_box(re_box, d);
      re.window = optional_box(re_window, d);
      re.dilations = cli::detail::long_list(re_dil, "--dilations");
      re.mixing_box = optional_box(re_mbox, d);
      re.threads = re_c.resolved_threads();
      return cli::cmd_report(F, re, re_c.json, std::cout, std::cerr);
    }
    if (suite->parsed()) {
      auto results = acceptance::run_all(su_c.resolved_threads(), su_c.json ? nullptr : &std::cout);
      std::size_t passed = 0;
      for (const auto& r : results) passed += r.pass;
      if (su_c.json) {
        Json j = Json::array();
        for (const auto& r : results) j.push_back(Json{{"criterion", r.id}, {"title", r.title}, {"pass", r.pass}, {"detail", r.detail}});
        std::cout << j.dump(2) << "\n";
      } else {
        std::cout << passed << "/" << results.size() << " criteria passed\n";
      }
      return passed == results.size() ? cli::kOk : cli::kVerifyFailed;
    }
  } catch (const BudgetExceeded& e) {
    std::cerr << "budget exhausted: " << e.what() << "; searched region: " << e.region() << "\n";
    return cli::kBudgetExhausted;
  } catch (const HashMismatch& e) {
    std::cerr << "error: hash mismatch: " << e.what() << "\n";
    return cli::kInputError;
  } catch (const UnsupportedOperation& e) {
    std::cerr << "error: unsupported operation: " << e.what() << "\n";
    return cli::kInputError;
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return cli::kInputError;
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return cli::kInputError;
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return cli::kInputError;
  } catch (const EngineUnavailable& e) {
    std::cerr << "error: " << e.what() << "\n";
    return cli::kInputError;
  }
  return cli::kInputError;
}
