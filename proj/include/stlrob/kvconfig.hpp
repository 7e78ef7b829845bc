// kvconfig.hpp — minimal "key = value" config reader ('#' comments, one pair
// per line, 2-vectors as "x, y").

#ifndef STLROB_KVCONFIG_HPP
#define STLROB_KVCONFIG_HPP

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>

#include "stlrob/dynamics.hpp"

namespace stlrob {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class KeyValueConfig {
public:
    static KeyValueConfig load(const std::string& path);
    static KeyValueConfig from_string(const std::string& text, const std::string& origin = "<string>");

    bool has(const std::string& key) const { return values_.count(key) != 0; }

    std::string get_string(const std::string& key) const;
    std::string get_string(const std::string& key, const std::string& fallback) const;
    double get_double(const std::string& key) const;
    double get_double(const std::string& key, double fallback) const;
    long get_int(const std::string& key) const;
    long get_int(const std::string& key, long fallback) const;
    std::uint64_t get_u64(const std::string& key, std::uint64_t fallback) const;
    Vec2 get_vec2(const std::string& key) const;
    Vec2 get_vec2(const std::string& key, Vec2 fallback) const;

    const std::map<std::string, std::string>& values() const { return values_; }

private:
    std::map<std::string, std::string> values_;
    std::string origin_;
};

}  // namespace stlrob

#endif  // STLROB_KVCONFIG_HPP
