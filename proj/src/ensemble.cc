// Copyright 2026 The qdc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include "qdc/ensemble.h"

#include <atomic>
#include <condition_variable>
#include <exception>
#include <fstream>
#include <map>
#include <mutex>
#include <ostream>
#include <stdexcept>
#include <thread>

#include "json.hpp"

using namespace qdc;

namespace {

std::string format_double(double value) {
    nlohmann::json j = value;
    return j.dump();
}

std::string manifest_line(OutputFormat format, const EnsembleSummary &summary, const std::string &error) {
    if (format == OutputFormat::Csv) {
        std::string line = "# manifest complete=" + std::string(summary.complete ? "true" : "false") +
                           " trajectories=" + std::to_string(summary.trajectories) +
                           " records=" + std::to_string(summary.records);
        if (!error.empty()) {
            line += " error=\"" + error + "\"";
        }
        return line + "\n";
    }
    nlohmann::ordered_json j;
    j["manifest"] = true;
    j["complete"] = summary.complete;
    j["trajectories"] = summary.trajectories;
    j["records"] = summary.records;
    if (!error.empty()) {
        j["error"] = error;
    }
    return j.dump() + "\n";
}

}  // namespace

OutputFormat qdc::output_format_for_path(std::string_view path) {
    return path.ends_with(".csv") ? OutputFormat::Csv : OutputFormat::JsonLines;
}

void EnsembleSpec::validate() const {
    if (Ls.empty() || ps.empty()) {
        throw std::invalid_argument("ensemble: need at least one L and one p");
    }
    if (samples.size() != 1 && samples.size() != Ls.size()) {
        throw std::invalid_argument("ensemble: give one sample count, or one per L");
    }
    for (std::size_t s : samples) {
        if (s == 0) {
            throw std::invalid_argument("ensemble: samples must be at least 1");
        }
    }
    for (std::size_t L : Ls) {
        for (double p : ps) {
            CircuitConfig c = base;
            c.L = L;
            c.p = p;
            c.validate();
        }
    }
}

std::size_t EnsembleSpec::samples_for(std::size_t L_index) const {
    return samples.size() == 1 ? samples.front() : samples.at(L_index);
}

std::size_t EnsembleSpec::total_trajectories() const {
    std::size_t total = 0;
    for (std::size_t k = 0; k < Ls.size(); k++) {
        total += samples_for(k) * ps.size();
    }
    return total;
}

std::vector<EnsembleTask> qdc::expand_tasks(const EnsembleSpec &spec) {
    spec.validate();
    std::vector<EnsembleTask> tasks;
    tasks.reserve(spec.total_trajectories());
    std::uint64_t index = 0;
    for (std::size_t k = 0; k < spec.Ls.size(); k++) {
        for (double p : spec.ps) {
            CircuitConfig c = spec.base;
            c.L = spec.Ls[k];
            c.p = p;
            for (std::size_t s = 0; s < spec.samples_for(k); s++) {
                tasks.push_back({c, index++});
            }
        }
    }
    return tasks;
}

void qdc::run_tasks_ordered(
    const std::vector<EnsembleTask> &tasks, std::size_t workers,
    const std::function<void(const TrajectoryRecord &)> &sink) {
    if (workers == 0) {
        workers = std::max<std::size_t>(1, std::thread::hardware_concurrency());
    }
    workers = std::min(workers, tasks.size());
    if (workers <= 1) {
        for (const auto &task : tasks) {
            sink(run_trajectory(task.config, task.trajectory_index));
        }
        return;
    }

    std::mutex mutex;
    std::condition_variable ready;
    std::map<std::size_t, TrajectoryRecord> finished;
    std::exception_ptr failure;
    std::atomic<std::size_t> next{0};
    std::atomic<bool> stop{false};

    auto work = [&] {
        while (!stop) {
            std::size_t k = next++;
            if (k >= tasks.size()) {
                return;
            }
            try {
                TrajectoryRecord record = run_trajectory(tasks[k].config, tasks[k].trajectory_index);
                std::lock_guard<std::mutex> lock(mutex);
                finished.emplace(k, std::move(record));
            } catch (...) {
                std::lock_guard<std::mutex> lock(mutex);
                if (!failure) {
                    failure = std::current_exception();
                }
                stop = true;
            }
            ready.notify_all();
        }
    };
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; w++) {
        pool.emplace_back(work);
    }

    try {
        for (std::size_t k = 0; k < tasks.size(); k++) {
            std::unique_lock<std::mutex> lock(mutex);
            ready.wait(lock, [&] { return finished.count(k) > 0 || failure; });
            auto it = finished.find(k);
            if (it == finished.end()) {
                break;
            }
            TrajectoryRecord record = std::move(it->second);
            finished.erase(it);
            lock.unlock();
            sink(record);
        }
    } catch (...) {
        std::lock_guard<std::mutex> lock(mutex);
        if (!failure) {
            failure = std::current_exception();
        }
        stop = true;
    }
    stop = true;
    for (auto &t : pool) {
        t.join();
    }
    if (failure) {
        std::rethrow_exception(failure);
    }
}

std::string qdc::format_jsonl(const TrajectoryRecord &record, bool include_timing) {
    std::string out;
    const CircuitConfig &c = record.config;
    for (const auto &snap : record.snapshots) {
        nlohmann::ordered_json j;
        j["L"] = c.L;
        j["p"] = c.p;
        j["T"] = c.layers();
        j["init"] = initial_state_name(c.initial_state);
        j["seed"] = c.master_seed;
        j["trajectory"] = record.trajectory_index;
        j["layer"] = snap.layer;
        nlohmann::ordered_json values = nlohmann::ordered_json::object();
        for (const auto &[name, v] : snap.values) {
            values[name] = v;
        }
        j["values"] = values;
        if (include_timing) {
            j["elapsed_s"] = snap.elapsed_s;
        }
        out += j.dump();
        out += '\n';
    }
    return out;
}

std::string qdc::format_csv(const TrajectoryRecord &record) {
    const CircuitConfig &c = record.config;
    std::string prefix = std::to_string(c.L) + "," + format_double(c.p) + "," + std::to_string(c.layers()) + "," +
                         std::string(initial_state_name(c.initial_state)) + "," + std::to_string(c.master_seed) +
                         "," + std::to_string(record.trajectory_index) + ",";
    std::string out;
    for (const auto &snap : record.snapshots) {
        for (const auto &[name, v] : snap.values) {
            out += prefix + std::to_string(snap.layer) + "," + name + "," + std::to_string(v) + "\n";
        }
    }
    return out;
}

EnsembleSummary qdc::run_ensemble(const EnsembleSpec &spec, std::ostream &out, OutputFormat format) {
    auto tasks = expand_tasks(spec);
    EnsembleSummary summary;
    if (format == OutputFormat::Csv) {
        out << kRawCsvHeader << "\n";
    }
    try {
        run_tasks_ordered(tasks, spec.workers, [&](const TrajectoryRecord &record) {
            out << (format == OutputFormat::Csv ? format_csv(record) : format_jsonl(record, spec.record_timing));
            if (!out) {
                throw std::runtime_error("write failed");
            }
            summary.trajectories++;
            summary.records += record.snapshots.size();
        });
    } catch (const std::exception &e) {
        out.clear();
        out << manifest_line(format, summary, e.what());
        out.flush();
        throw;
    }
    summary.complete = true;
    out << manifest_line(format, summary, "");
    out.flush();
    return summary;
}

EnsembleSummary qdc::run_ensemble(const EnsembleSpec &spec) {
    if (spec.output_path.empty()) {
        throw std::invalid_argument("ensemble: no output path");
    }
    spec.validate();
    std::ofstream out(spec.output_path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot open '" + spec.output_path + "' for writing");
    }
    try {
        EnsembleSummary summary = run_ensemble(spec, out, output_format_for_path(spec.output_path));
        out.close();
        if (!out) {
            throw std::runtime_error("write failed");
        }
        return summary;
    } catch (const std::invalid_argument &) {
        throw;
    } catch (const std::exception &e) {
        throw std::runtime_error("'" + spec.output_path + "': " + e.what());
    }
}

std::vector<TrajectoryRecord> qdc::run_ensemble_records(const EnsembleSpec &spec) {
    std::vector<TrajectoryRecord> records;
    run_tasks_ordered(expand_tasks(spec), spec.workers, [&](const TrajectoryRecord &r) { records.push_back(r); });
    return records;
}
