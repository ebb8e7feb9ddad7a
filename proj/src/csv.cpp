#include "ecomplex/csv.hpp"

#include <charconv>
#include <istream>
#include <system_error>

namespace ecomplex {

bool CsvReader::next_row(std::vector<std::string> &fields) {
    fields.clear();
    std::string field;
    bool in_quotes = false;
    bool any = false;
    bool at_line_start = true;
    int c;

    while ((c = in_.get()) != std::char_traits<char>::eof()) {
        if (!any) {
            ++line_;
            if (at_line_start && c == '#' && !in_quotes) {
                // comment line: swallow to newline
                while (c != '\n' && c != std::char_traits<char>::eof())
                    c = in_.get();
                continue;
            }
            any = true;
            row_start_line_ = line_;
        }
        at_line_start = false;

        if (in_quotes) {
            if (c == '"') {
                if (in_.peek() == '"') {
                    in_.get();
                    field.push_back('"');
                } else {
                    in_quotes = false;
                }
            } else {
                if (c == '\n')
                    ++line_;
                field.push_back(static_cast<char>(c));
            }
            continue;
        }
        switch (c) {
        case '"':
            in_quotes = true;
            break;
        case ',':
            fields.push_back(std::move(field));
            field.clear();
            break;
        case '\r':
            break;
        case '\n':
            fields.push_back(std::move(field));
            return true;
        default:
            field.push_back(static_cast<char>(c));
        }
    }
    if (!any)
        return false;
    fields.push_back(std::move(field));
    return true;
}

std::string csv_join(const std::vector<std::string> &fields) {
    std::string out;
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i)
            out.push_back(',');
        const std::string &f = fields[i];
        if (f.find_first_of(",\"\n\r") != std::string::npos) {
            out.push_back('"');
            for (char ch : f) {
                if (ch == '"')
                    out.push_back('"');
                out.push_back(ch);
            }
            out.push_back('"');
        } else {
            out += f;
        }
    }
    return out;
}

std::string format_double(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

} // namespace ecomplex
