#pragma once

#include <cstdio>
#include <fstream>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace ctrwfp {

// RFC-4180 quoting; numbers are emitted with %.17g so reruns are
// byte-identical. A leading "# config_hash=..." line ties the artifact
// to its configuration.
class CsvWriter {
public:
    CsvWriter(const std::string& path, const std::string& config_hash,
              const std::vector<std::string>& columns) {
        out_.open(path, std::ios::binary);
        if (!out_) throw std::runtime_error("cannot open " + path);
        out_ << "# config_hash=" << config_hash << "\n";
        write_strings(columns);
    }

    static std::string quote(const std::string& field) {
        bool needs = false;
        for (char c : field)
            if (c == ',' || c == '"' || c == '\n' || c == '\r') needs = true;
        if (!needs) return field;
        std::string q = "\"";
        for (char c : field) {
            if (c == '"') q += '"';
            q += c;
        }
        q += '"';
        return q;
    }

    void write_strings(const std::vector<std::string>& fields) {
        for (std::size_t i = 0; i < fields.size(); ++i) {
            if (i) out_ << ',';
            out_ << quote(fields[i]);
        }
        out_ << '\n';
    }

    static std::string number(double v) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.17g", v);
        return buf;
    }

    void write_row(std::initializer_list<double> values) {
        write_row(std::span<const double>(values.begin(), values.size()));
    }
    void write_row_prefixed(std::size_t id, std::initializer_list<double> values) {
        write_row_prefixed(id, std::span<const double>(values.begin(), values.size()));
    }

    void write_row(std::span<const double> values) {
        char buf[32];
        for (std::size_t i = 0; i < values.size(); ++i) {
            if (i) out_ << ',';
            std::snprintf(buf, sizeof buf, "%.17g", values[i]);
            out_ << buf;
        }
        out_ << '\n';
    }

    void write_row_prefixed(std::size_t id, std::span<const double> values) {
        out_ << id;
        char buf[32];
        for (double v : values) {
            std::snprintf(buf, sizeof buf, "%.17g", v);
            out_ << ',' << buf;
        }
        out_ << '\n';
    }

private:
    std::ofstream out_;
};

}  // namespace ctrwfp
