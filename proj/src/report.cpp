#include "warplag/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>

#include "warplag/errors.hpp"

namespace warplag {

namespace {

void append_number(std::string& out, double x) {
    if (!std::isfinite(x)) {
        out += "null";
        return;
    }
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    out += buf;
}

void append_indent(std::string& out, int indent, int depth) {
    if (indent < 0) return;
    out += '\n';
    out.append(static_cast<std::size_t>(indent) * depth, ' ');
}

void append_value(std::string& out, const Json& v, int indent, int depth) {
    switch (v.type()) {
    case Json::value_t::null:
        out += "null";
        break;
    case Json::value_t::boolean:
        out += v.get<bool>() ? "true" : "false";
        break;
    case Json::value_t::number_integer:
    case Json::value_t::number_unsigned:
        out += v.dump();
        break;
    case Json::value_t::number_float:
        append_number(out, v.get<double>());
        break;
    case Json::value_t::string:
        out += v.dump(); // handles escaping
        break;
    case Json::value_t::array: {
        if (v.empty()) {
            out += "[]";
            break;
        }
        out += '[';
        bool first = true;
        for (const auto& item : v) {
            if (!first) out += ',';
            first = false;
            append_indent(out, indent, depth + 1);
            append_value(out, item, indent, depth + 1);
        }
        append_indent(out, indent, depth);
        out += ']';
        break;
    }
    case Json::value_t::object: {
        if (v.empty()) {
            out += "{}";
            break;
        }
        out += '{';
        bool first = true;
        for (auto it = v.begin(); it != v.end(); ++it) {
            if (!first) out += ',';
            first = false;
            append_indent(out, indent, depth + 1);
            out += Json(it.key()).dump();
            out += indent < 0 ? ":" : ": ";
            append_value(out, it.value(), indent, depth + 1);
        }
        append_indent(out, indent, depth);
        out += '}';
        break;
    }
    default:
        out += "null";
        break;
    }
}

} // namespace

std::string dump_report(const Json& doc, int indent) {
    std::string out;
    append_value(out, doc, indent, 0);
    return out;
}

void write_report(const Json& doc, const std::string& path) {
    const std::string text = dump_report(doc) + "\n";
    if (path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot open report path '" + path + "'");
    out << text;
}

Json check_record(const std::string& name, bool pass, double max_residual, double tolerance) {
    Json rec;
    rec["name"] = name;
    rec["max_residual"] = max_residual;
    rec["tolerance"] = tolerance;
    rec["pass"] = pass;
    return rec;
}

} // namespace warplag
