#include "stlrob/kvconfig.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace stlrob {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r");
    std::size_t b = s.find_last_not_of(" \t\r");
    if (a == std::string::npos) return {};
    return s.substr(a, b - a + 1);
}

double to_double(const std::string& key, const std::string& v, const std::string& origin) {
    double out = 0.0;
    auto r = std::from_chars(v.data(), v.data() + v.size(), out);
    if (r.ec != std::errc() || r.ptr != v.data() + v.size())
        throw ConfigError(origin + ": key '" + key + "' is not a number: '" + v + "'");
    return out;
}

}  // namespace

KeyValueConfig KeyValueConfig::from_string(const std::string& text, const std::string& origin) {
    KeyValueConfig cfg;
    cfg.origin_ = origin;
    std::istringstream in(text);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::size_t hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        std::string t = trim(line);
        if (t.empty()) continue;
        std::size_t eq = t.find('=');
        if (eq == std::string::npos)
            throw ConfigError(origin + ":" + std::to_string(line_no) + ": expected 'key = value'");
        std::string key = trim(t.substr(0, eq));
        std::string value = trim(t.substr(eq + 1));
        if (key.empty())
            throw ConfigError(origin + ":" + std::to_string(line_no) + ": empty key");
        cfg.values_[key] = value;
    }
    return cfg;
}

KeyValueConfig KeyValueConfig::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return from_string(ss.str(), path);
}

std::string KeyValueConfig::get_string(const std::string& key) const {
    auto it = values_.find(key);
    if (it == values_.end()) throw ConfigError(origin_ + ": missing key '" + key + "'");
    return it->second;
}

std::string KeyValueConfig::get_string(const std::string& key, const std::string& fallback) const {
    auto it = values_.find(key);
    return it == values_.end() ? fallback : it->second;
}

double KeyValueConfig::get_double(const std::string& key) const {
    return to_double(key, get_string(key), origin_);
}

double KeyValueConfig::get_double(const std::string& key, double fallback) const {
    auto it = values_.find(key);
    return it == values_.end() ? fallback : to_double(key, it->second, origin_);
}

long KeyValueConfig::get_int(const std::string& key) const {
    return static_cast<long>(get_double(key));
}

long KeyValueConfig::get_int(const std::string& key, long fallback) const {
    auto it = values_.find(key);
    return it == values_.end() ? fallback : static_cast<long>(to_double(key, it->second, origin_));
}

std::uint64_t KeyValueConfig::get_u64(const std::string& key, std::uint64_t fallback) const {
    auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    std::uint64_t out = 0;
    const std::string& v = it->second;
    auto r = std::from_chars(v.data(), v.data() + v.size(), out);
    if (r.ec != std::errc() || r.ptr != v.data() + v.size())
        throw ConfigError(origin_ + ": key '" + key + "' is not an unsigned integer: '" + v + "'");
    return out;
}

Vec2 KeyValueConfig::get_vec2(const std::string& key) const {
    std::string v = get_string(key);
    std::size_t comma = v.find(',');
    if (comma == std::string::npos)
        throw ConfigError(origin_ + ": key '" + key + "' must be 'x, y'");
    return {to_double(key, trim(v.substr(0, comma)), origin_),
            to_double(key, trim(v.substr(comma + 1)), origin_)};
}

Vec2 KeyValueConfig::get_vec2(const std::string& key, Vec2 fallback) const {
    return has(key) ? get_vec2(key) : fallback;
}

}  // namespace stlrob
