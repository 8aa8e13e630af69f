#include <CLI11.hpp>

#include <iostream>

#include "bbfs/cli.hpp"
#include "bbfs/errors.hpp"

int main(int argc, char** argv) {
    CLI::App app{"bounded boolean functional synthesis"};
    app.require_subcommand(1);

    bbfs::RunConfig cfg;
    std::string spec_path, skolem_path, dir_path, gprime_path, h_path;
    std::string schedule_text, arch_text = "cnf";

    auto add_synth_flags = [&](CLI::App* c) {
        c->add_option("--k-schedule", schedule_text, "comma list of k:seconds entries");
        c->add_option("--arch", arch_text, "cnf or dnf")->check(CLI::IsMember({"cnf", "dnf"}));
        c->add_option("--seed", cfg.seed, "rng seed");
        c->add_option("--samples", cfg.samples, "requested sample count");
    };

    CLI::App* synth = app.add_subcommand("synth", "synthesize a skolem vector for a .bfs spec");
    synth->add_option("spec", spec_path, ".bfs file")->required();
    add_synth_flags(synth);
    synth->add_option("--out", cfg.out_path, "skolem output path (default <spec>.skolem)");
    synth->add_option("--json", cfg.json_path, "also write the JSON report here");

    CLI::App* verify = app.add_subcommand("verify", "check a skolem file against a spec");
    verify->add_option("spec", spec_path, ".bfs file")->required();
    verify->add_option("skolem", skolem_path, "skolem file")->required();

    CLI::App* bench = app.add_subcommand("bench", "run every .bfs spec in a directory");
    bench->add_option("dir", dir_path, "benchmark directory")->required();
    add_synth_flags(bench);
    bench->add_option("--csv", cfg.csv_path, "write the CSV table here");
    bench->add_option("--md", cfg.md_path, "write a markdown table here");
    bench->add_option("--jobs", cfg.jobs, "concurrent synthesis jobs");

    CLI::App* repair = app.add_subcommand("repair", "fill LUTs so the skeleton matches a target");
    repair->add_option("skeleton", gprime_path, "LUT skeleton .bfs")->required();
    repair->add_option("target", h_path, "target function .bfs (no outputs)")->required();
    add_synth_flags(repair);

    CLI11_PARSE(app, argc, argv);

    try {
        if (!schedule_text.empty())
            cfg.schedule = bbfs::parse_schedule(schedule_text);
        cfg.arch = bbfs::parse_arch(arch_text);
    } catch (const bbfs::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }

    if (app.got_subcommand(synth))
        return bbfs::cmd_synth(spec_path, cfg, std::cout, std::cerr);
    if (app.got_subcommand(verify))
        return bbfs::cmd_verify(spec_path, skolem_path, std::cout, std::cerr);
    if (app.got_subcommand(bench))
        return bbfs::cmd_bench(dir_path, cfg, std::cout, std::cerr);
    return bbfs::cmd_repair(gprime_path, h_path, cfg, std::cout, std::cerr);
}
