#pragma once

// Sectioned key-value run configuration:
//
//   [section]
//   key = value        # comment
//
// Parsing keeps line numbers for diagnostics. A schema check reports unknown
// keys (fatal in strict mode), and every run can emit its fully resolved
// configuration for reproducibility.

#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "dqsim/io.hpp"

namespace dqsim {

struct config_error : std::runtime_error {
    config_error(const std::string& msg, int line_ = 0)
        : std::runtime_error(line_ > 0 ? "config line " + std::to_string(line_) + ": " + msg
                                       : "config: " + msg),
          line(line_) {}
    int line;
};

class ParsedConfig {
  public:
    struct Entry {
        std::string value;
        int line = 0;
    };

    static ParsedConfig parse_text(const std::string& text) {
        ParsedConfig cfg;
        std::istringstream in(text);
        std::string raw;
        std::string section;
        int lineno = 0;
        while (std::getline(in, raw)) {
            ++lineno;
            std::string line = raw;
            const auto hash = line.find('#');
            if (hash != std::string::npos) line = line.substr(0, hash);
            line = textio::trim(line);
            if (line.empty()) continue;
            if (line.front() == '[') {
                if (line.back() != ']')
                    throw config_error("unterminated section header '" + line + "'", lineno);
                section = textio::trim(line.substr(1, line.size() - 2));
                if (section.empty()) throw config_error("empty section name", lineno);
                cfg.sections_[section];  // record even if empty
                continue;
            }
            const auto eq = line.find('=');
            if (eq == std::string::npos)
                throw config_error("expected 'key = value', got '" + line + "'", lineno);
            if (section.empty()) throw config_error("key before any [section]", lineno);
            const std::string key = textio::trim(line.substr(0, eq));
            if (key.empty()) throw config_error("empty key", lineno);
            auto& sec = cfg.sections_[section];
            if (sec.count(key))
                throw config_error("duplicate key '" + key + "' in [" + section + "]", lineno);
            sec[key] = Entry{textio::trim(line.substr(eq + 1)), lineno};
        }
        return cfg;
    }

    bool has(const std::string& section, const std::string& key) const {
        auto s = sections_.find(section);
        return s != sections_.end() && s->second.count(key) > 0;
    }

    std::string get_string(const std::string& section, const std::string& key,
                           const std::string& fallback) const {
        auto s = sections_.find(section);
        if (s == sections_.end()) return fallback;
        auto k = s->second.find(key);
        return k == s->second.end() ? fallback : k->second.value;
    }

    std::string require_string(const std::string& section, const std::string& key) const {
        if (!has(section, key))
            throw config_error("missing required key '" + key + "' in [" + section + "]");
        return sections_.at(section).at(key).value;
    }

    double get_double(const std::string& section, const std::string& key, double fallback) const {
        if (!has(section, key)) return fallback;
        return parse_entry_double(section, key);
    }

    double require_double(const std::string& section, const std::string& key) const {
        if (!has(section, key))
            throw config_error("missing required key '" + key + "' in [" + section + "]");
        return parse_entry_double(section, key);
    }

    long long get_int(const std::string& section, const std::string& key, long long fallback) const {
        if (!has(section, key)) return fallback;
        const auto& e = sections_.at(section).at(key);
        try {
            std::size_t pos = 0;
            const long long v = std::stoll(e.value, &pos);
            if (pos != e.value.size()) throw std::invalid_argument("trailing characters");
            return v;
        } catch (const std::exception&) {
            throw config_error("key '" + key + "' is not an integer: '" + e.value + "'", e.line);
        }
    }

    bool get_bool(const std::string& section, const std::string& key, bool fallback) const {
        if (!has(section, key)) return fallback;
        const auto& e = sections_.at(section).at(key);
        if (e.value == "true" || e.value == "1") return true;
        if (e.value == "false" || e.value == "0") return false;
        throw config_error("key '" + key + "' must be true/false: '" + e.value + "'", e.line);
    }

    std::vector<double> get_doubles(const std::string& section, const std::string& key,
                                    const std::vector<double>& fallback) const {
        if (!has(section, key)) return fallback;
        const auto& e = sections_.at(section).at(key);
        std::vector<double> out;
        for (const auto& tok : textio::split_ws(e.value)) {
            try {
                out.push_back(parse_double(tok));
            } catch (const std::exception&) {
                throw config_error("key '" + key + "' has a non-numeric entry '" + tok + "'",
                                   e.line);
            }
        }
        return out;
    }

    // Entries not present in the schema, as "line: [section] key" strings.
    std::vector<std::string> unknown_keys(
        const std::map<std::string, std::set<std::string>>& schema) const {
        std::vector<std::string> out;
        for (const auto& [section, entries] : sections_) {
            auto s = schema.find(section);
            if (s == schema.end()) {
                for (const auto& [key, e] : entries)
                    out.push_back("line " + std::to_string(e.line) + ": unknown section [" +
                                  section + "] (key '" + key + "')");
                if (entries.empty()) out.push_back("unknown section [" + section + "]");
                continue;
            }
            for (const auto& [key, e] : entries)
                if (!s->second.count(key))
                    out.push_back("line " + std::to_string(e.line) + ": unknown key '" + key +
                                  "' in [" + section + "]");
        }
        return out;
    }

  private:
    double parse_entry_double(const std::string& section, const std::string& key) const {
        const auto& e = sections_.at(section).at(key);
        try {
            return parse_double(e.value);
        } catch (const std::exception&) {
            throw config_error("key '" + key + "' is not a number: '" + e.value + "'", e.line);
        }
    }

    std::map<std::string, std::map<std::string, Entry>> sections_;
};

// Ordered emitter for resolved configurations.
class ConfigWriter {
  public:
    void section(const std::string& name) { lines_.push_back("[" + name + "]"); }
    void kv(const std::string& key, const std::string& value) {
        lines_.push_back(key + " = " + value);
    }
    void kv(const std::string& key, double value) { kv(key, format_double(value)); }
    void kv(const std::string& key, long long value) { kv(key, std::to_string(value)); }
    void kv(const std::string& key, bool value) { kv(key, std::string(value ? "true" : "false")); }
    void blank() { lines_.push_back(""); }

    std::string text() const {
        std::string out;
        for (const auto& l : lines_) {
            out += l;
            out += "\n";
        }
        return out;
    }

  private:
    std::vector<std::string> lines_;
};

}  // namespace dqsim
