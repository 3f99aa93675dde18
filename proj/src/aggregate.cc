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


#include "qdc/aggregate.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <stdexcept>

#include "json.hpp"
#include "qdc/ensemble.h"

using namespace qdc;

namespace {

struct LineError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::vector<std::string> split_csv(const std::string &line) {
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
        std::size_t comma = line.find(',', start);
        fields.push_back(line.substr(start, comma - start));
        if (comma == std::string::npos) {
            return fields;
        }
        start = comma + 1;
    }
}

template <typename T>
T parse_field(const std::string &text, const char *what) {
    T value{};
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (text.empty() || ec != std::errc() || ptr != text.data() + text.size()) {
        throw LineError(std::string("bad ") + what + " '" + text + "'");
    }
    return value;
}

std::string strip_cr(std::string line) {
    if (!line.empty() && line.back() == '\r') {
        line.pop_back();
    }
    return line;
}

std::string format_number(double value) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
    return std::string(buf, ptr);
}

void check_manifest_complete(bool complete, const std::string &error) {
    if (!complete) {
        throw LineError("output is marked incomplete" + (error.empty() ? "" : " (" + error + ")"));
    }
}

template <typename Fn>
void for_each_line(std::istream &in, const std::string &source, Fn &&fn) {
    std::string line;
    std::size_t number = 0;
    while (std::getline(in, line)) {
        number++;
        try {
            fn(strip_cr(line), number);
        } catch (const LineError &e) {
            throw std::runtime_error(source + ":" + std::to_string(number) + ": " + e.what());
        } catch (const nlohmann::json::exception &e) {
            throw std::runtime_error(source + ":" + std::to_string(number) + ": " + e.what());
        }
    }
    if (in.bad()) {
        throw std::runtime_error(source + ": read failed");
    }
}

}  // namespace

void Aggregator::add(std::size_t L, double p, std::size_t layer, const std::string &observable, std::int64_t value) {
    Sums &s = groups_[{L, p, layer, observable}];
    s.count++;
    s.sum += value;
    s.sum_squares += value * value;
}

void Aggregator::add(const TrajectoryRecord &record) {
    for (const auto &snap : record.snapshots) {
        for (const auto &[name, v] : snap.values) {
            add(record.config.L, record.config.p, snap.layer, name, v);
        }
    }
}

void Aggregator::read_jsonl_line(const std::string &line) {
    auto j = nlohmann::json::parse(line);
    if (!j.is_object()) {
        throw LineError("expected a JSON object");
    }
    if (j.contains("manifest")) {
        check_manifest_complete(j.at("complete").get<bool>(), j.value("error", std::string()));
        return;
    }
    auto L = j.at("L").get<std::size_t>();
    auto p = j.at("p").get<double>();
    auto layer = j.at("layer").get<std::size_t>();
    const auto &values = j.at("values");
    if (!values.is_object()) {
        throw LineError("'values' must be an object");
    }
    for (const auto &[name, v] : values.items()) {
        if (!v.is_number_integer()) {
            throw LineError("observable '" + name + "' is not an integer");
        }
        add(L, p, layer, name, v.get<std::int64_t>());
    }
}

void Aggregator::read_csv_line(const std::string &line) {
    if (line.starts_with("# manifest")) {
        check_manifest_complete(line.find("complete=true") != std::string::npos, "");
        return;
    }
    if (line.starts_with("#")) {
        return;
    }
    auto fields = split_csv(line);
    if (fields.size() != 9) {
        throw LineError("expected 9 fields, got " + std::to_string(fields.size()));
    }
    add(parse_field<std::size_t>(fields[0], "L"), parse_field<double>(fields[1], "p"),
        parse_field<std::size_t>(fields[6], "layer"), fields[7], parse_field<std::int64_t>(fields[8], "value"));
}

void Aggregator::read(std::istream &in, const std::string &source) {
    bool csv = false;
    for_each_line(in, source, [&](const std::string &line, std::size_t number) {
        if (line.empty()) {
            return;
        }
        if (number == 1 && line == kRawCsvHeader) {
            csv = true;
            return;
        }
        if (csv) {
            read_csv_line(line);
        } else {
            read_jsonl_line(line);
        }
    });
}

void Aggregator::read_file(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot open '" + path + "'");
    }
    read(in, path);
}

std::vector<AggregatePoint> Aggregator::points() const {
    std::vector<AggregatePoint> out;
    out.reserve(groups_.size());
    for (const auto &[key, s] : groups_) {
        const auto &[L, p, layer, observable] = key;
        auto n = static_cast<double>(s.count);
        AggregatePoint point{L, p, layer, observable, static_cast<double>(s.sum) / n, 0.0, s.count};
        if (s.count > 1) {
            // Exact integer numerator: n sum(x^2) - (sum x)^2 = n (n - 1) var.
            auto numerator = static_cast<double>(
                static_cast<__int128>(s.count) * s.sum_squares - static_cast<__int128>(s.sum) * s.sum);
            double variance = numerator / (n * (n - 1));
            point.std_error = std::sqrt(std::max(0.0, variance) / n);
        }
        out.push_back(point);
    }
    return out;
}

std::vector<AggregatePoint> qdc::aggregate_records(std::span<const TrajectoryRecord> records) {
    Aggregator agg;
    for (const auto &r : records) {
        agg.add(r);
    }
    return agg.points();
}

std::vector<AggregatePoint> qdc::aggregate_files(std::span<const std::string> paths) {
    Aggregator agg;
    for (const auto &path : paths) {
        agg.read_file(path);
    }
    return agg.points();
}

void qdc::write_aggregate_csv(std::ostream &out, std::span<const AggregatePoint> points) {
    out << kAggregateCsvHeader << "\n";
    for (const auto &pt : points) {
        out << pt.L << "," << format_number(pt.p) << "," << pt.layer << "," << pt.observable << ","
            << format_number(pt.mean) << "," << format_number(pt.std_error) << "," << pt.count << "\n";
    }
}

std::vector<AggregatePoint> qdc::read_aggregate_csv(std::istream &in, const std::string &source) {
    std::vector<AggregatePoint> points;
    for_each_line(in, source, [&](const std::string &line, std::size_t number) {
        if (number == 1) {
            if (line != kAggregateCsvHeader) {
                throw LineError("expected header '" + std::string(kAggregateCsvHeader) + "'");
            }
            return;
        }
        if (line.empty()) {
            return;
        }
        auto f = split_csv(line);
        if (f.size() != 7) {
            throw LineError("expected 7 fields, got " + std::to_string(f.size()));
        }
        points.push_back(
            {parse_field<std::size_t>(f[0], "L"), parse_field<double>(f[1], "p"),
             parse_field<std::size_t>(f[2], "layer"), f[3], parse_field<double>(f[4], "mean"),
             parse_field<double>(f[5], "std_error"), parse_field<std::size_t>(f[6], "count")});
    });
    return points;
}

std::vector<AggregatePoint> qdc::load_points(std::span<const std::string> paths) {
    Aggregator raw;
    std::vector<AggregatePoint> points;
    for (const auto &path : paths) {
        std::ifstream in(path, std::ios::binary);
        if (!in) {
            throw std::runtime_error("cannot open '" + path + "'");
        }
        std::string first;
        std::getline(in, first);
        in.clear();
        in.seekg(0);
        if (strip_cr(first) == kAggregateCsvHeader) {
            auto more = read_aggregate_csv(in, path);
            points.insert(points.end(), more.begin(), more.end());
        } else {
            raw.read(in, path);
        }
    }
    auto more = raw.points();
    points.insert(points.end(), more.begin(), more.end());
    return points;
}

std::vector<AggregatePoint> qdc::final_layer_points(
    std::span<const AggregatePoint> points, const std::string &observable) {
    std::map<std::size_t, std::size_t> last_layer;
    for (const auto &pt : points) {
        if (pt.observable == observable) {
            auto &layer = last_layer[pt.L];
            layer = std::max(layer, pt.layer);
        }
    }
    std::vector<AggregatePoint> out;
    for (const auto &pt : points) {
        if (pt.observable == observable && pt.layer == last_layer[pt.L]) {
            out.push_back(pt);
        }
    }
    std::sort(out.begin(), out.end(), [](const AggregatePoint &a, const AggregatePoint &b) {
        return std::tie(a.L, a.p) < std::tie(b.L, b.p);
    });
    return out;
}
