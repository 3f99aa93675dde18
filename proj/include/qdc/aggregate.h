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


#ifndef QDC_AGGREGATE_H
#define QDC_AGGREGATE_H

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "qdc/circuit.h"

namespace qdc {

/// Ensemble statistics of one observable at one (L, p, layer).
struct AggregatePoint {
    std::size_t L = 0;
    double p = 0;
    std::size_t layer = 0;
    std::string observable;
    double mean = 0;
    /// Sample standard deviation over sqrt(count); 0 when count == 1.
    double std_error = 0;
    std::size_t count = 0;

    bool operator==(const AggregatePoint &other) const = default;
};

/// Groups integer samples by (L, p, layer, observable).
///
/// Sums are kept exactly, so the result does not depend on the order of the samples.
class Aggregator {
   public:
    void add(std::size_t L, double p, std::size_t layer, const std::string &observable, std::int64_t value);
    void add(const TrajectoryRecord &record);

    /// Reads raw trajectory output (JSON lines or the raw CSV layout). `source` names
    /// the stream in error messages, which also carry the line number.
    void read(std::istream &in, const std::string &source);
    void read_file(const std::string &path);

    /// Sorted by (L, p, layer, observable).
    std::vector<AggregatePoint> points() const;

   private:
    struct Sums {
        std::size_t count = 0;
        std::int64_t sum = 0;
        std::int64_t sum_squares = 0;
    };
    void read_jsonl_line(const std::string &line);
    void read_csv_line(const std::string &line);

    std::map<std::tuple<std::size_t, double, std::size_t, std::string>, Sums> groups_;
};

std::vector<AggregatePoint> aggregate_records(std::span<const TrajectoryRecord> records);
std::vector<AggregatePoint> aggregate_files(std::span<const std::string> paths);

inline constexpr std::string_view kAggregateCsvHeader = "L,p,layer,observable,mean,std_error,count";

void write_aggregate_csv(std::ostream &out, std::span<const AggregatePoint> points);
std::vector<AggregatePoint> read_aggregate_csv(std::istream &in, const std::string &source);

/// Loads aggregate CSV files as they are and aggregates anything else as raw output.
std::vector<AggregatePoint> load_points(std::span<const std::string> paths);

/// The points of one observable, keeping only the last recorded layer of each L.
std::vector<AggregatePoint> final_layer_points(std::span<const AggregatePoint> points, const std::string &observable);

}  // namespace qdc

#endif
