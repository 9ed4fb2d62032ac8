#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "rabi/experiment.hpp"

namespace {

int guarded(const std::function<int()>& body) {
    try {
        return body();
    } catch (const rabi::ValidationError& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return 2;
    } catch (const rabi::NumericsError& e) {
        std::cerr << "numerical contract breached: " << e.what() << "\n";
        return 3;
    } catch (const rabi::IoError& e) {
        std::cerr << "i/o error: " << e.what() << "\n";
        return 4;
    } catch (const std::invalid_argument& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return 2;
    }
}

void print_warnings(const std::vector<std::string>& warnings) {
    for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Finite-time Rabi and Mathieu dynamics via Picard, Magnus and RK4"};
    app.require_subcommand(1);

    std::string config_path;
    std::string output_dir;
    bool emit_gnuplot = false;

    auto* run = app.add_subcommand("run", "run one experiment from a config file");
    run->add_option("config", config_path, "key = value config file")->required();
    run->add_option("--output-dir", output_dir, "override output.dir");
    run->add_flag("--gnuplot-script", emit_gnuplot, "also write plot.gp next to the CSVs");

    auto* cmp = app.add_subcommand("compare", "run several methods and tabulate differences");
    cmp->add_option("config", config_path, "key = value config file")->required();
    cmp->add_option("--output-dir", output_dir, "override output.dir");

    auto* swp = app.add_subcommand("sweep", "parameter sweep (photon surface or peak times)");
    swp->add_option("config", config_path, "key = value config file")->required();
    swp->add_option("--output-dir", output_dir, "override output.dir");

    app.add_subcommand("presets", "list built-in figure presets");

    CLI11_PARSE(app, argc, argv);

    if (app.got_subcommand("presets")) {
        std::cout << rabi::list_presets();
        return 0;
    }

    return guarded([&]() -> int {
        rabi::Config cfg = rabi::Config::from_file(config_path);
        if (!output_dir.empty()) cfg.set("output.dir", output_dir);

        if (app.got_subcommand("run")) {
            rabi::RunRecord rec = rabi::run_experiment(cfg);
            print_warnings(rec.warnings);
            for (const auto& f : rec.files_written) std::cout << "wrote " << f << "\n";
            if (rec.peaks && rec.peaks->fit.valid)
                std::cout << "decay fit: a = " << rec.peaks->fit.a << ", b = " << rec.peaks->fit.b
                          << " over " << rec.peaks->fit.n_doublet_points << " doublet peaks\n";
            if (emit_gnuplot) {
                const auto dir = std::filesystem::path(cfg.get("output.dir", "."));
                std::ofstream gp(dir / "plot.gp");
                if (!gp) throw rabi::IoError("cannot write plot.gp");
                gp << rabi::gnuplot_script(rec);
                std::cout << "wrote " << (dir / "plot.gp").string() << "\n";
            }
            return 0;
        }
        if (app.got_subcommand("compare")) {
            rabi::CompareResult res = rabi::compare_methods(cfg);
            print_warnings(res.warnings);
            for (const auto& f : res.files_written) std::cout << "wrote " << f << "\n";
            for (size_t a = 0; a < res.method_names.size(); ++a)
                for (size_t b = a + 1; b < res.method_names.size(); ++b)
                    std::cout << "sup |" << res.method_names[a] << " - " << res.method_names[b]
                              << "| on " << rabi::observable_name(res.observable) << " = "
                              << res.sup_diff[a][b] << "\n";
            return 0;
        }
        // sweep
        std::vector<std::string> files;
        rabi::run_sweep(cfg, &files);
        for (const auto& f : files) std::cout << "wrote " << f << "\n";
        return 0;
    });
}
