#include "progtr/config.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "progtr/errors.hpp"

namespace progtr {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

std::vector<std::string> split_commas(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(trim(item));
    if (!s.empty() && s.back() == ',') out.push_back("");
    return out;
}

double parse_double(const std::string& text, const std::string& where) {
    char* end = nullptr;
    double v = std::strtod(text.c_str(), &end);
    if (end == text.c_str() || *end != '\0') {
        throw ConfigError(where + ": not a number: '" + text + "'");
    }
    return v;
}

long parse_long(const std::string& text, const std::string& where) {
    char* end = nullptr;
    long v = std::strtol(text.c_str(), &end, 10);
    if (end == text.c_str() || *end != '\0') {
        throw ConfigError(where + ": not an integer: '" + text + "'");
    }
    return v;
}

} // namespace

ConfigFile ConfigFile::parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_text(buf.str(), path);
}

ConfigFile ConfigFile::parse_text(const std::string& text, const std::string& label) {
    ConfigFile cfg;
    cfg.label_ = label;
    std::stringstream ss(text);
    std::string line;
    std::string section;
    int lineno = 0;
    while (std::getline(ss, line)) {
        ++lineno;
        std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        if (t.front() == '[') {
            if (t.back() != ']' || t.size() < 3) {
                throw ConfigError(label + ":" + std::to_string(lineno) + ": malformed section header");
            }
            section = trim(t.substr(1, t.size() - 2));
            if (section.empty()) {
                throw ConfigError(label + ":" + std::to_string(lineno) + ": empty section name");
            }
            continue;
        }
        std::size_t eq = t.find('=');
        if (eq == std::string::npos) {
            throw ConfigError(label + ":" + std::to_string(lineno) + ": expected key=value");
        }
        std::string key = trim(t.substr(0, eq));
        std::string value = trim(t.substr(eq + 1));
        if (key.empty()) {
            throw ConfigError(label + ":" + std::to_string(lineno) + ": empty key");
        }
        if (section.empty()) {
            throw ConfigError(label + ":" + std::to_string(lineno) +
                              ": key before any [section] header");
        }
        std::string full = section + "." + key;
        auto it = cfg.entries_.find(full);
        if (it != cfg.entries_.end()) {
            throw ConfigError(label + ":" + std::to_string(lineno) + ": duplicate key '" + full +
                              "' (first at line " + std::to_string(it->second.line) + ")");
        }
        cfg.entries_[full] = Entry{value, lineno, false};
    }
    return cfg;
}

bool ConfigFile::has(const std::string& key) const { return entries_.count(key) > 0; }

std::string ConfigFile::get_string(const std::string& key, const std::string& fallback) const {
    auto it = entries_.find(key);
    if (it == entries_.end()) return fallback;
    it->second.used = true;
    return it->second.value;
}

double ConfigFile::get_double(const std::string& key, double fallback) const {
    auto it = entries_.find(key);
    if (it == entries_.end()) return fallback;
    it->second.used = true;
    return parse_double(it->second.value, label_ + ":" + std::to_string(it->second.line) + ": " + key);
}

long ConfigFile::get_long(const std::string& key, long fallback) const {
    auto it = entries_.find(key);
    if (it == entries_.end()) return fallback;
    it->second.used = true;
    return parse_long(it->second.value, label_ + ":" + std::to_string(it->second.line) + ": " + key);
}

std::vector<double> ConfigFile::get_list(const std::string& key,
                                         const std::vector<double>& fallback) const {
    auto it = entries_.find(key);
    if (it == entries_.end()) return fallback;
    it->second.used = true;
    std::string where = label_ + ":" + std::to_string(it->second.line) + ": " + key;
    std::vector<double> out;
    for (const std::string& item : split_commas(it->second.value)) {
        out.push_back(parse_double(item, where));
    }
    return out;
}

std::vector<std::string> ConfigFile::get_strings(const std::string& key,
                                                 const std::vector<std::string>& fallback) const {
    auto it = entries_.find(key);
    if (it == entries_.end()) return fallback;
    it->second.used = true;
    return split_commas(it->second.value);
}

std::vector<std::string> ConfigFile::unused_keys() const {
    std::vector<std::string> out;
    for (const auto& [key, entry] : entries_) {
        if (!entry.used) out.push_back(key + " (line " + std::to_string(entry.line) + ")");
    }
    return out;
}

int ConfigFile::line_of(const std::string& key) const {
    auto it = entries_.find(key);
    return it == entries_.end() ? 0 : it->second.line;
}

std::vector<double> parse_snr_grid(const std::string& text) {
    std::string t = trim(text);
    if (t.empty()) throw ConfigError("empty SNR grid");
    if (t.find(':') != std::string::npos) {
        std::vector<std::string> parts;
        std::stringstream ss(t);
        std::string item;
        while (std::getline(ss, item, ':')) parts.push_back(trim(item));
        if (parts.size() != 3) throw ConfigError("SNR range must be lo:hi:step: '" + text + "'");
        double lo = parse_double(parts[0], "snr grid");
        double hi = parse_double(parts[1], "snr grid");
        double step = parse_double(parts[2], "snr grid");
        if (step <= 0.0) throw ConfigError("SNR step must be positive");
        if (hi < lo) throw ConfigError("SNR range is inverted");
        std::vector<double> out;
        for (double v = lo; v <= hi + 1e-9; v += step) out.push_back(v);
        return out;
    }
    std::vector<double> out;
    for (const std::string& item : split_commas(t)) out.push_back(parse_double(item, "snr grid"));
    return out;
}

} // namespace progtr
