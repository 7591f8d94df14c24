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

#include "app/commands.hpp"
#include "app/trends.hpp"
#include "metrics/nse.hpp"
#include "model/model_io.hpp"
#include "numerics/errors.hpp"

#include <algorithm>
#include <cstring>
#include <memory>
#include <exception>
#include <string>

struct fhnn_config
{
    fhnn::RunConfig cfg;
};

struct fhnn_model
{
    fhnn::LoadedModel loaded;
};

namespace {

thread_local std::string last_error;

fhnn_status fail(fhnn_status status, const std::string& message)
{
    last_error = message;
    return status;
}

fhnn_status status_of(fhnn::ErrorKind kind)
{
    switch (kind) {
    case fhnn::ErrorKind::config: return FHNN_ERR_CONFIG;
    case fhnn::ErrorKind::data: return FHNN_ERR_DATA;
    case fhnn::ErrorKind::divergence: return FHNN_ERR_DIVERGENCE;
    case fhnn::ErrorKind::shape: return FHNN_ERR_SHAPE;
    case fhnn::ErrorKind::numeric: return FHNN_ERR_NUMERIC;
    case fhnn::ErrorKind::io: return FHNN_ERR_IO;
    case fhnn::ErrorKind::internal: break;
    }
    return FHNN_ERR_INTERNAL;
}

template <class Fn>
fhnn_status guarded(Fn&& fn) noexcept
{
    try {
        fn();
        return FHNN_OK;
    } catch (const fhnn::Error& e) {
        return fail(status_of(e.kind()), e.what());
    } catch (const std::bad_alloc&) {
        return fail(FHNN_ERR_INTERNAL, "out of memory");
    } catch (const std::exception& e) {
        return fail(FHNN_ERR_INTERNAL, e.what());
    } catch (...) {
        return fail(FHNN_ERR_INTERNAL, "unknown error");
    }
}

void copy_out(const std::string& value, char* buf, std::size_t cap, std::size_t* needed)
{
    if (needed)
        *needed = value.size() + 1;
    if (buf && cap > 0) {
        const std::size_t n = std::min(cap - 1, value.size());
        std::memcpy(buf, value.data(), n);
        buf[n] = '\0';
    }
}

} // namespace

extern "C" {

const char* fhnn_version(void) { return FHNN_VERSION; }

const char* fhnn_last_error(void) { return last_error.c_str(); }

const char* fhnn_status_name(fhnn_status status)
{
    switch (status) {
    case FHNN_OK: return "ok";
    case FHNN_ERR_INTERNAL: return "internal error";
    case FHNN_ERR_CONFIG: return "config error";
    case FHNN_ERR_DATA: return "data error";
    case FHNN_ERR_DIVERGENCE: return "training diverged";
    case FHNN_ERR_SHAPE: return "shape error";
    case FHNN_ERR_NUMERIC: return "numeric error";
    case FHNN_ERR_IO: return "i/o error";
    case FHNN_ERR_ARGUMENT: return "invalid argument";
    }
    return "unknown status";
}

fhnn_status fhnn_config_new(const char* preset, fhnn_config** out)
{
    if (!out)
        return fail(FHNN_ERR_ARGUMENT, "output handle pointer is null");
    *out = nullptr;
    return guarded([&] {
        auto handle = std::make_unique<fhnn_config>();
        if (preset && *preset)
            handle->cfg.apply_preset(preset);
        *out = handle.release();
    });
}

fhnn_status fhnn_config_load(const char* path, fhnn_config** out)
{
    if (!path || !out)
        return fail(FHNN_ERR_ARGUMENT, "path and output handle pointer must not be null");
    *out = nullptr;
    return guarded([&] { *out = new fhnn_config{fhnn::RunConfig::from_file(path)}; });
}

void fhnn_config_free(fhnn_config* config) { delete config; }

fhnn_status fhnn_config_set(fhnn_config* config, const char* key, const char* value)
{
    if (!config || !key || !value)
        return fail(FHNN_ERR_ARGUMENT, "config, key and value must not be null");
    return guarded([&] { config->cfg.set(key, value); });
}

fhnn_status fhnn_config_apply_env(fhnn_config* config, size_t* n_applied)
{
    if (!config)
        return fail(FHNN_ERR_ARGUMENT, "config handle is null");
    return guarded([&] {
        const auto keys = config->cfg.apply_env();
        if (n_applied)
            *n_applied = keys.size();
    });
}

fhnn_status fhnn_config_get(const fhnn_config* config, const char* key, char* buf, size_t cap, size_t* needed)
{
    if (!config || !key)
        return fail(FHNN_ERR_ARGUMENT, "config and key must not be null");
    return guarded([&] { copy_out(config->cfg.get(key), buf, cap, needed); });
}

fhnn_status fhnn_config_snapshot(const fhnn_config* config, char* buf, size_t cap, size_t* needed)
{
    if (!config)
        return fail(FHNN_ERR_ARGUMENT, "config handle is null");
    return guarded([&] { copy_out(config->cfg.snapshot(), buf, cap, needed); });
}

fhnn_status fhnn_run(const fhnn_config* config, const char* command)
{
    if (!config || !command)
        return fail(FHNN_ERR_ARGUMENT, "config and command must not be null");
    return guarded([&] {
        const auto& cfg = config->cfg;
        const auto log = fhnn::stderr_logger(cfg);
        const std::string name = command;
        if (name == "simulate")
            fhnn::cmd_simulate(cfg, log);
        else if (name == "train")
            fhnn::cmd_train(cfg, log);
        else if (name == "pretrain")
            fhnn::cmd_pretrain(cfg, log);
        else if (name == "finetune")
            fhnn::cmd_finetune(cfg, log);
        else if (name == "evaluate")
            fhnn::cmd_evaluate(cfg, log);
        else if (name == "states")
            fhnn::cmd_states(cfg, log);
        else if (name == "trends")
            fhnn::cmd_trends(cfg, log);
        else
            throw fhnn::ConfigError("unknown command '" + name + "'");
    });
}

fhnn_status fhnn_model_load(const char* path, fhnn_model** out)
{
    if (!path || !out)
        return fail(FHNN_ERR_ARGUMENT, "path and output handle pointer must not be null");
    *out = nullptr;
    return guarded([&] { *out = new fhnn_model{fhnn::load_model(path)}; });
}

void fhnn_model_free(fhnn_model* model) { delete model; }

fhnn_status fhnn_model_info_get(const fhnn_model* model, fhnn_model_info* info)
{
    if (!model || !info)
        return fail(FHNN_ERR_ARGUMENT, "model and info must not be null");
    return guarded([&] {
        const auto& cfg = model->loaded.model->config();
        *info = fhnn_model_info{};
        copy_out(fhnn::to_string(cfg.kind), info->kind, sizeof info->kind, nullptr);
        info->d_x = cfg.d_x;
        info->input_length = cfg.input_length;
        info->horizon = cfg.horizon;
        info->n_parameters = model->loaded.model->params().scalar_count();
    });
}

fhnn_status fhnn_model_predict(const fhnn_model* model, const double* x_hist, const double* y_hist,
                               const double* x_fcst, double* y_out)
{
    if (!model || !x_hist || !y_hist || !x_fcst || !y_out)
        return fail(FHNN_ERR_ARGUMENT, "model, inputs and output must not be null");
    return guarded([&] {
        const auto& cfg = model->loaded.model->config();
        const std::size_t T = cfg.input_length, K = cfg.horizon, D = cfg.d_x;
        fhnn::Window w;
        w.x_hist = fhnn::Matrix(T, D);
        w.y_hist = fhnn::Matrix(T, 1);
        w.x_fcst = fhnn::Matrix(K, D);
        w.y_fcst = fhnn::Matrix(K, 1);
        std::copy(x_hist, x_hist + T * D, w.x_hist.values().begin());
        std::copy(y_hist, y_hist + T, w.y_hist.values().begin());
        std::copy(x_fcst, x_fcst + K * D, w.x_fcst.values().begin());
        const auto y = model->loaded.model->predict(w);
        std::copy(y.begin(), y.end(), y_out);
    });
}

fhnn_status fhnn_nse(const double* obs, const double* sim, size_t n, double* out)
{
    if (!obs || !sim || !out)
        return fail(FHNN_ERR_ARGUMENT, "obs, sim and out must not be null");
    return guarded([&] { *out = fhnn::nse({obs, n}, {sim, n}); });
}

} // extern "C"
