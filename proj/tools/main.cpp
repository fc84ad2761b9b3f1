// Command-line frontend: analyze, rate, synthesize, verify, simulate, audit
// and sweep over aggregation instances.

#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "wshsa/cli.hpp"

namespace {

using wshsa::cli::CmdResult;
using wshsa::cli::Options;

void emit(const CmdResult& res, const Options& opt) {
    std::string text = res.table.empty() ? res.report.dump(2) + "\n" : res.table;
    if (opt.out.empty()) {
        std::cout << text;
    } else {
        std::ofstream out(opt.out);
        if (!out) {
            std::cerr << "cannot write report to " << opt.out << "\n";
            std::exit(wshsa::cli::kUsage);
        }
        out << text;
        if (!res.table.empty()) std::cout << res.table;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"optimal key rates and verified key schemes for weakly-secure hierarchical aggregation"};
    app.require_subcommand(1);

    Options opt;
    std::string instance_path, scheme_path, sweep_dir;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--out", opt.out, "write the report to this path instead of stdout");
        cmd->add_option("--seed", opt.seed, "seed for synthesis and simulation randomness");
        cmd->add_option("--q", opt.q, "prime field override for synthesis");
        cmd->add_option("--budget", opt.budget,
                        "state budget for the exhaustive oracle (env WSHSA_BUDGET, default 2^24)");
        cmd->add_flag("--no-closure", opt.no_closure,
                      "require the families to be monotone instead of closing them");
    };

    CLI::App* analyze = app.add_subcommand("analyze", "derived set quantities and classification");
    analyze->add_option("instance", instance_path)->required();
    add_common(analyze);

    CLI::App* rate = app.add_subcommand("rate", "optimal total key rate or bounds");
    rate->add_option("instance", instance_path)->required();
    add_common(rate);

    CLI::App* synth = app.add_subcommand("synthesize", "build a concrete finite-field key scheme");
    synth->add_option("instance", instance_path)->required();
    synth->add_option("scheme_out", opt.scheme_out, "where to write the scheme file");
    synth->add_flag("--verify", opt.verify_after, "run the security verifier on the result");
    add_common(synth);

    CLI::App* verify = app.add_subcommand("verify", "check every security constraint exactly");
    verify->add_option("instance", instance_path)->required();
    verify->add_option("scheme", scheme_path, "scheme file (or use --synthesize)");
    verify->add_flag("--synthesize", opt.synthesize, "synthesize a scheme instead of loading one");
    verify->add_flag("--exhaustive", opt.exhaustive,
                     "fail unless the histogram oracle can run within budget");
    add_common(verify);

    CLI::App* simulate = app.add_subcommand("simulate", "run protocol rounds and check sum recovery");
    simulate->add_option("instance", instance_path)->required();
    simulate->add_option("scheme", scheme_path, "scheme file (or use --synthesize)");
    simulate->add_flag("--synthesize", opt.synthesize, "synthesize a scheme instead of loading one");
    simulate->add_option("--rounds", opt.rounds, "number of rounds (default 100)");
    add_common(simulate);

    CLI::App* audit = app.add_subcommand("audit", "evaluate the converse inequalities on a scheme");
    audit->add_option("instance", instance_path)->required();
    audit->add_option("scheme", scheme_path, "scheme file (or use --synthesize)");
    audit->add_flag("--synthesize", opt.synthesize, "synthesize a scheme instead of loading one");
    add_common(audit);

    CLI::App* sweep = app.add_subcommand("sweep", "summary table over a directory of instances");
    sweep->add_option("dir", sweep_dir)->required();
    add_common(sweep);

    CLI11_PARSE(app, argc, argv);

    try {
        CmdResult res;
        if (analyze->parsed()) res = wshsa::cli::cmd_analyze(instance_path, opt);
        else if (rate->parsed()) res = wshsa::cli::cmd_rate(instance_path, opt);
        else if (synth->parsed()) res = wshsa::cli::cmd_synthesize(instance_path, opt);
        else if (verify->parsed()) res = wshsa::cli::cmd_verify(instance_path, scheme_path, opt);
        else if (simulate->parsed()) res = wshsa::cli::cmd_simulate(instance_path, scheme_path, opt);
        else if (audit->parsed()) res = wshsa::cli::cmd_audit(instance_path, scheme_path, opt);
        else if (sweep->parsed()) res = wshsa::cli::cmd_sweep(sweep_dir, opt);
        emit(res, opt);
        return res.code;
    } catch (const wshsa::ValidationError& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return wshsa::cli::kValidation;
    } catch (const wshsa::SynthesisError& e) {
        std::cerr << "synthesis failed after " << e.attempts << " attempts (final q=" << e.final_q
                  << "): " << e.what() << "\n";
        return wshsa::cli::kSynthesisFailed;
    } catch (const wshsa::SchemeError& e) {
        std::cerr << "scheme error: " << e.what() << "\n";
        return wshsa::cli::kDimensionMismatch;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return wshsa::cli::kDimensionMismatch;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return wshsa::cli::kUsage;
    }
}
