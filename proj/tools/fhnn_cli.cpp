//------------------------------------------------------------------------------
//
//   Copyright 2026 The FHNN Authors
//
//   Licensed under the Apache License, Version 2.0 (the "License");
//   you may not use this file except in compliance with the License.
//   You may obtain a copy of the License at
//
//       http://www.apache.org/licenses/LICENSE-2.0
//
//   Unless required by applicable law or agreed to in writing, software
//   distributed under the License is distributed on an "AS IS" BASIS,
//   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
//   See the License for the specific language governing permissions and
//   limitations under the License.
//
//------------------------------------------------------------------------------

#include "fhnn/fhnn.h"

#include <CLI11.hpp>

#include <cstdio>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace {

struct GlobalOptions
{
    std::string config_path;
    std::string preset;
    std::optional<std::string> seed;
    std::optional<std::string> threads;
    std::optional<std::string> out;
    std::vector<std::string> overrides;
    bool verbose = false;
};

using ConfigPtr = std::unique_ptr<fhnn_config, decltype(&fhnn_config_free)>;

int exit_code(fhnn_status status)
{
    switch (status) {
    case FHNN_OK: return 0;
    case FHNN_ERR_CONFIG:
    case FHNN_ERR_ARGUMENT: return 2;
    case FHNN_ERR_DATA: return 3;
    case FHNN_ERR_DIVERGENCE: return 4;
    default: return 1;
    }
}

int report(fhnn_status status)
{
    std::fprintf(stderr, "fhnn: %s: %s\n", fhnn_status_name(status), fhnn_last_error());
    return exit_code(status);
}

void add_common(CLI::App* cmd, GlobalOptions& opt)
{
    cmd->add_option("--config", opt.config_path, "key=value config file")->check(CLI::ExistingFile);
    cmd->add_option("--preset", opt.preset, "nws-ncrfc, camels or desk (ignored with --config)");
    cmd->add_option("--seed", opt.seed, "base random seed");
    cmd->add_option("--threads", opt.threads, "worker threads; 1 gives the canonical schedule");
    cmd->add_option("--out", opt.out, "output directory");
    cmd->add_option("--set", opt.overrides, "extra KEY=VALUE override (repeatable)");
    cmd->add_flag("-v,--verbose", opt.verbose, "progress on stderr");
}

// defaults < preset < file < FHNN_<KEY> environment < command-line flags
int run(const std::string& command, const GlobalOptions& opt)
{
    fhnn_config* raw = nullptr;
    fhnn_status st = opt.config_path.empty() ? fhnn_config_new(opt.preset.c_str(), &raw)
                                             : fhnn_config_load(opt.config_path.c_str(), &raw);
    if (st != FHNN_OK)
        return report(st);
    ConfigPtr cfg(raw, &fhnn_config_free);
    if ((st = fhnn_config_apply_env(cfg.get(), nullptr)) != FHNN_OK)
        return report(st);

    auto set = [&](const char* key, const std::string& value) { return fhnn_config_set(cfg.get(), key, value.c_str()); };
    for (const auto& kv : opt.overrides) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos) {
            std::fprintf(stderr, "fhnn: --set expects KEY=VALUE, got '%s'\n", kv.c_str());
            return 2;
        }
        if ((st = set(kv.substr(0, eq).c_str(), kv.substr(eq + 1))) != FHNN_OK)
            return report(st);
    }
    if (opt.seed && (st = set("seed", *opt.seed)) != FHNN_OK)
        return report(st);
    if (opt.threads && (st = set("threads", *opt.threads)) != FHNN_OK)
        return report(st);
    if (opt.out && (st = set("out", *opt.out)) != FHNN_OK)
        return report(st);
    if (opt.verbose && (st = set("verbose", "1")) != FHNN_OK)
        return report(st);

    if ((st = fhnn_run(cfg.get(), command.c_str())) != FHNN_OK)
        return report(st);
    return 0;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Factorized hierarchical forecaster: simulation, training and evaluation"};
    app.set_version_flag("--version", fhnn_version());
    app.require_subcommand(1);

    const std::pair<const char*, const char*> commands[] = {
        {"simulate", "write a synthetic fleet (CSVs and manifest)"},
        {"train", "train local or global ensembles and report test NSE"},
        {"pretrain", "train on simulated flow"},
        {"finetune", "continue a pretrained run on observed flow"},
        {"evaluate", "score a run directory on the test period"},
        {"states", "export per-scale latent state trajectories"},
        {"trends", "desk-scale experiment suite on a synthetic fleet"},
    };
    GlobalOptions opt;
    for (const auto& [name, help] : commands)
        add_common(app.add_subcommand(name, help), opt);

    CLI11_PARSE(app, argc, argv);
    return run(app.get_subcommands().front()->get_name(), opt);
}
