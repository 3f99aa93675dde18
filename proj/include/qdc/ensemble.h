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


#ifndef QDC_ENSEMBLE_H
#define QDC_ENSEMBLE_H

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "qdc/circuit.h"

namespace qdc {

enum class OutputFormat {
    JsonLines,
    Csv,
};

/// ".csv" selects CSV; anything else is JSON lines.
OutputFormat output_format_for_path(std::string_view path);

/// A grid of (L, p) points sampled with a shared circuit template.
///
/// Trajectory indices run sequentially over the grid (L outer, p inner, samples
/// innermost), so every trajectory has a distinct seed for a given master seed.
struct EnsembleSpec {
    std::vector<std::size_t> Ls;
    std::vector<double> ps;
    /// Either one count for every L or one count per entry of Ls.
    std::vector<std::size_t> samples{1};
    CircuitConfig base;
    std::string output_path;
    /// 0 picks the hardware concurrency.
    std::size_t workers = 1;
    /// Adds per-snapshot wall time to the output (which makes it non-reproducible).
    bool record_timing = false;

    void validate() const;
    std::size_t samples_for(std::size_t L_index) const;
    std::size_t total_trajectories() const;
};

struct EnsembleTask {
    CircuitConfig config;
    std::uint64_t trajectory_index = 0;
};

std::vector<EnsembleTask> expand_tasks(const EnsembleSpec &spec);

/// Runs the tasks on a pool of `workers` threads and hands each finished record to
/// `sink` on the calling thread, in task order.
///
/// The first exception from a worker or from `sink` stops the pool and is rethrown.
void run_tasks_ordered(
    const std::vector<EnsembleTask> &tasks, std::size_t workers,
    const std::function<void(const TrajectoryRecord &)> &sink);

/// One JSON object per snapshot, each terminated by a newline.
std::string format_jsonl(const TrajectoryRecord &record, bool include_timing = false);

inline constexpr std::string_view kRawCsvHeader = "L,p,T,init,seed,trajectory,layer,observable,value";

/// One CSV row per (snapshot, observable), without the header.
std::string format_csv(const TrajectoryRecord &record);

struct EnsembleSummary {
    std::size_t trajectories = 0;
    std::size_t records = 0;
    bool complete = false;
};

/// Streams the ensemble to `out` and appends a manifest record. If a trajectory or the
/// stream fails, the manifest says `complete: false` and the error is rethrown.
EnsembleSummary run_ensemble(const EnsembleSpec &spec, std::ostream &out, OutputFormat format);

/// Writes to spec.output_path. I/O errors name the path.
EnsembleSummary run_ensemble(const EnsembleSpec &spec);

/// Runs the ensemble in memory.
std::vector<TrajectoryRecord> run_ensemble_records(const EnsembleSpec &spec);

}  // namespace qdc

#endif
