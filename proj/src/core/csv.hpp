#pragma once

#include <cstdio>
#include <initializer_list>
#include <ostream>
#include <string>

namespace evoscale {

// CSV dialect used by every artifact: UTF-8, comma separators, '#'-prefixed
// metadata lines, 17 significant digits for reals (lossless round-trip).
class CsvWriter {
public:
    explicit CsvWriter(std::ostream& os) : os_(os) {}

    void metadata(const std::string& key, const std::string& value) {
        os_ << "# " << key << ": " << value << "\n";
    }
    void metadata(const std::string& key, double value) { metadata(key, format(value)); }
    void metadata(const std::string& key, long value) {
        metadata(key, std::to_string(value));
    }
    void metadata(const std::string& key, int value) { metadata(key, std::to_string(value)); }

    void header(std::initializer_list<const char*> cols) {
        bool first = true;
        for (const char* c : cols) {
            if (!first) os_ << ',';
            os_ << c;
            first = false;
        }
        os_ << '\n';
    }

    template <class... Ts>
    void row(Ts... values) {
        bool first = true;
        ((write_cell(values, first), first = false), ...);
        os_ << '\n';
    }

    static std::string format(double v) {
        char buf[40];
        std::snprintf(buf, sizeof(buf), "%.17g", v);
        return buf;
    }

private:
    void write_cell(double v, bool first) {
        if (!first) os_ << ',';
        os_ << format(v);
    }
    void write_cell(int v, bool first) {
        if (!first) os_ << ',';
        os_ << v;
    }
    void write_cell(long v, bool first) {
        if (!first) os_ << ',';
        os_ << v;
    }
    void write_cell(const char* v, bool first) {
        if (!first) os_ << ',';
        os_ << v;
    }
    void write_cell(const std::string& v, bool first) {
        if (!first) os_ << ',';
        os_ << v;
    }
    std::ostream& os_;
};

}  // namespace evoscale
