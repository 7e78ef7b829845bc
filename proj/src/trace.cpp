#include "stlrob/trace.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <unordered_map>
#include <unordered_set>

namespace stlrob {

namespace {

// Uniform-sampling tolerance when checking the time column of a loaded file.
constexpr double kTimeJitter = 1e-9;

std::vector<std::string_view> split_csv(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        std::size_t comma = line.find(',', start);
        if (comma == std::string_view::npos) {
            out.push_back(line.substr(start));
            return out;
        }
        out.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r'))
        s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
        s.remove_suffix(1);
    return s;
}

double parse_cell(std::string_view cell, std::size_t line_no) {
    cell = trim(cell);
    double v = 0.0;
    auto res = std::from_chars(cell.data(), cell.data() + cell.size(), v);
    if (res.ec != std::errc() || res.ptr != cell.data() + cell.size())
        throw TraceError("non-numeric cell '" + std::string(cell) + "' on line " +
                         std::to_string(line_no));
    return v;
}

void append_g9(std::string& out, double v) {
    char buf[40];
    int n = std::snprintf(buf, sizeof buf, "%.9g", v);
    out.append(buf, static_cast<std::size_t>(n));
}

}  // namespace

Trace::Trace(double t0, double dt, std::vector<std::string> channels,
             std::vector<double> samples)
    : t0_(t0), dt_(dt), channels_(std::move(channels)), data_(std::move(samples)) {
    if (channels_.empty()) throw TraceError("trace needs at least one channel");
    if (!(dt_ > 0.0) || !std::isfinite(dt_)) throw TraceError("trace needs dt > 0");
    if (data_.empty() || data_.size() % channels_.size() != 0)
        throw TraceError("sample matrix size is not a multiple of the channel count");
    rows_ = data_.size() / channels_.size();
    std::unordered_set<std::string_view> seen;
    for (const std::string& c : channels_)
        if (!seen.insert(c).second) throw TraceError("duplicate channel name '" + c + "'");
}

std::size_t Trace::channel_index(std::string_view name) const {
    for (std::size_t i = 0; i < channels_.size(); ++i)
        if (channels_[i] == name) return i;
    throw EvalError("unknown channel '" + std::string(name) + "'");
}

Trace Trace::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw TraceError("cannot open trace file '" + path + "'");
    std::string line;
    if (!std::getline(in, line)) throw TraceError("empty trace file '" + path + "'");
    auto header = split_csv(line);
    if (header.empty() || trim(header[0]) != "time")
        throw TraceError("malformed header: first column must be 'time'");
    std::vector<std::string> channels;
    for (std::size_t i = 1; i < header.size(); ++i) {
        auto name = trim(header[i]);
        if (name.empty()) throw TraceError("malformed header: empty channel name");
        channels.emplace_back(name);
    }
    if (channels.empty()) throw TraceError("malformed header: no data channels");

    std::vector<double> times;
    std::vector<double> data;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        auto cells = split_csv(line);
        if (cells.size() != channels.size() + 1)
            throw TraceError("ragged row on line " + std::to_string(line_no) + ": expected " +
                             std::to_string(channels.size() + 1) + " cells, got " +
                             std::to_string(cells.size()));
        times.push_back(parse_cell(cells[0], line_no));
        for (std::size_t i = 1; i < cells.size(); ++i) data.push_back(parse_cell(cells[i], line_no));
    }
    if (times.empty()) throw TraceError("trace file '" + path + "' has no samples");

    double t0 = times.front();
    double dt = 1.0;
    if (times.size() > 1) {
        dt = times[1] - times[0];
        if (!(dt > 0.0)) throw TraceError("time column must be strictly increasing");
        for (std::size_t k = 1; k < times.size(); ++k) {
            double step = times[k] - times[k - 1];
            if (!(step > 0.0)) throw TraceError("time column must be strictly increasing");
            if (std::abs(step - dt) > kTimeJitter)
                throw TraceError("non-uniform sampling: step deviates by more than 1e-9 s at row " +
                                 std::to_string(k + 1));
        }
    }
    return Trace(t0, dt, std::move(channels), std::move(data));
}

void Trace::save(const std::string& path) const {
    std::string out = "time";
    for (const std::string& c : channels_) {
        out += ',';
        out += c;
    }
    out += '\n';
    for (std::size_t k = 0; k < rows_; ++k) {
        append_g9(out, time(k));
        for (std::size_t j = 0; j < channels_.size(); ++j) {
            out += ',';
            append_g9(out, at(k, j));
        }
        out += '\n';
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw TraceError("cannot open '" + path + "' for writing");
    f << out;
    if (!f) throw TraceError("failed writing '" + path + "'");
}

IndexRange window_indices(const Trace& trace, double t, double a, double b) {
    if (a > b) throw EvalError("window requires a <= b");
    const double eps = trace.dt() * 1e-6;
    double lo_time = t + a - eps;
    double hi_time = t + b + eps;
    double lo_f = std::ceil((lo_time - trace.t0()) / trace.dt());
    double hi_f = std::floor((hi_time - trace.t0()) / trace.dt());
    double last = static_cast<double>(trace.size() - 1);
    if (lo_f < 0.0) lo_f = 0.0;
    if (hi_f > last) hi_f = last;
    if (lo_f > hi_f)
        throw EvalError("empty window: no sample in [" + std::to_string(t + a) + ", " +
                        std::to_string(t + b) + "]");
    return IndexRange{static_cast<std::size_t>(lo_f), static_cast<std::size_t>(hi_f)};
}

namespace {

double eval_expr(const PredicateExpr& e, std::span<const double> row,
                 const std::unordered_map<std::string, std::size_t>& cols) {
    using Kind = PredicateExpr::Kind;
    switch (e.kind()) {
        case Kind::Constant: return e.value();
        case Kind::Channel: return row[cols.at(e.channel_name())];
        case Kind::Add:
            return eval_expr(e.children()[0], row, cols) + eval_expr(e.children()[1], row, cols);
        case Kind::Subtract:
            return eval_expr(e.children()[0], row, cols) - eval_expr(e.children()[1], row, cols);
        case Kind::Scale: return e.value() * eval_expr(e.children()[0], row, cols);
        case Kind::Norm: {
            double sq = 0.0;
            for (const PredicateExpr& c : e.children()) {
                double v = eval_expr(c, row, cols);
                sq += v * v;
            }
            return std::sqrt(sq);
        }
    }
    return 0.0;
}

std::unordered_map<std::string, std::size_t> bind_channels(const Trace& trace,
                                                           const PredicateExpr& p) {
    std::vector<std::string> names;
    p.collect_channels(names);
    std::unordered_map<std::string, std::size_t> cols;
    for (const std::string& n : names)
        if (!cols.count(n)) cols.emplace(n, trace.channel_index(n));
    return cols;
}

}  // namespace

std::vector<double> predicate_signal(const Trace& trace, const PredicateExpr& p) {
    auto cols = bind_channels(trace, p);
    std::vector<double> out(trace.size());
    for (std::size_t k = 0; k < trace.size(); ++k) out[k] = eval_expr(p, trace.row(k), cols);
    return out;
}

double eval_predicate(const Trace& trace, const PredicateExpr& p, std::size_t k) {
    auto cols = bind_channels(trace, p);
    return eval_expr(p, trace.row(k), cols);
}

}  // namespace stlrob
