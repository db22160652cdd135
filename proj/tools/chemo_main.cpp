#include "chemo/harness.hpp"
#include "chemo/record_io.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>

using namespace chemo;

int main(int argc, char** argv) {
    CLI::App app{"radial two-species chemotaxis-competition laboratory"};
    app.require_subcommand(1);

    std::string config_path, out_dir = "out", record_path;
    int workers = 0, stride = 0;

    auto add_common = [&](CLI::App* sub, bool needs_config) {
        if (needs_config)
            sub->add_option("--config", config_path, "configuration file")->required();
        sub->add_option("--out", out_dir, "output directory");
        sub->add_option("--workers", workers, "worker threads (0 = auto)");
        sub->add_option("--stride", stride, "sampling stride override");
    };

    CLI::App* classify = app.add_subcommand("classify", "regime prediction for a model");
    add_common(classify, true);
    CLI::App* simulate = app.add_subcommand("simulate", "run one configuration");
    add_common(simulate, true);
    CLI::App* sweep = app.add_subcommand("sweep", "run a parameter sweep");
    add_common(sweep, true);
    CLI::App* audit = app.add_subcommand("audit", "re-audit a stored run record");
    audit->add_option("--record", record_path, "runrecord.json path")->required();
    CLI::App* makedata = app.add_subcommand("make-data", "build + validate initial data");
    add_common(makedata, true);

    CLI11_PARSE(app, argc, argv);

    try {
        if (classify->parsed()) {
            KeyValueConfig cfg = KeyValueConfig::parse_file(config_path);
            RunConfig rc = RunConfig::from_config(cfg);
            std::cout << render_classification(rc.model);
            return 0;
        }
        if (simulate->parsed()) {
            KeyValueConfig cfg = KeyValueConfig::parse_file(config_path);
            RunConfig rc = RunConfig::from_config(cfg);
            if (stride > 0) rc.sample_stride = stride;
            RunRecord rec = cli_simulate(rc, out_dir);
            std::cout << "termination: " << termination_name(rec.termination.cause)
                      << " at t=" << format_g17(rec.termination.time) << "\n";
            if (rec.termination.fit_T)
                std::cout << "blowup fit: T=" << format_g17(*rec.termination.fit_T)
                          << " q=" << format_g17(*rec.termination.fit_q) << "\n";
            return 0;
        }
        if (sweep->parsed()) {
            KeyValueConfig cfg = KeyValueConfig::parse_file(config_path);
            auto outcomes = cli_sweep(cfg, out_dir, workers);
            int failed = 0;
            for (const auto& oc : outcomes)
                if (!oc.error.empty()) ++failed;
            std::cout << "sweep: " << outcomes.size() << " points, " << failed
                      << " failed\n";
            return failed == 0 ? 0 : 1;
        }
        if (audit->parsed()) return cli_audit(record_path, std::cout);
        if (makedata->parsed()) {
            KeyValueConfig cfg = KeyValueConfig::parse_file(config_path);
            RunConfig rc = RunConfig::from_config(cfg);
            return cli_make_data(rc, out_dir, std::cout);
        }
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "invalid configuration: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
