#pragma once

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace ridepool {

// Minimal line-based CSV reader. No quoting support; the file formats used
// here are plain comma-separated numbers and labels. Reports the 1-based line
// number of the offending row in every error.
class CsvReader {
public:
    CsvReader(const std::string &path, const std::vector<std::string> &expectedHeader)
        : path_(path), in_(path) {
        if (!in_.good())
            throw std::runtime_error("cannot open file: " + path);
        std::string headerLine;
        if (!std::getline(in_, headerLine))
            throw std::runtime_error(path + ": empty file, expected header");
        ++lineNo_;
        auto fields = splitLine(headerLine);
        if (fields.size() < expectedHeader.size())
            throw std::runtime_error(parseError("header mismatch"));
        for (size_t i = 0; i < expectedHeader.size(); ++i) {
            if (fields[i] != expectedHeader[i])
                throw std::runtime_error(parseError("expected header column '" + expectedHeader[i] +
                                                    "', got '" + fields[i] + "'"));
        }
        numColumns_ = fields.size();
    }

    // Reads the next data row; returns false at end of file.
    bool next(std::vector<std::string> &fields) {
        std::string line;
        while (std::getline(in_, line)) {
            ++lineNo_;
            if (line.empty())
                continue;
            if (!line.empty() && line.back() == '\r')
                line.pop_back();
            fields = splitLine(line);
            if (fields.size() != numColumns_)
                throw std::runtime_error(parseError("expected " + std::to_string(numColumns_) +
                                                    " columns, got " + std::to_string(fields.size())));
            return true;
        }
        return false;
    }

    int64_t asInt(const std::vector<std::string> &fields, size_t col) const {
        try {
            size_t pos = 0;
            int64_t v = std::stoll(fields[col], &pos);
            if (pos != fields[col].size())
                throw std::invalid_argument("trailing chars");
            return v;
        } catch (const std::exception &) {
            throw std::runtime_error(parseError("invalid integer '" + fields[col] + "'"));
        }
    }

    double asDouble(const std::vector<std::string> &fields, size_t col) const {
        try {
            size_t pos = 0;
            double v = std::stod(fields[col], &pos);
            if (pos != fields[col].size())
                throw std::invalid_argument("trailing chars");
            return v;
        } catch (const std::exception &) {
            throw std::runtime_error(parseError("invalid number '" + fields[col] + "'"));
        }
    }

    std::string parseError(const std::string &msg) const {
        return path_ + ":" + std::to_string(lineNo_) + ": " + msg;
    }

    int lineNumber() const { return lineNo_; }

private:
    static std::vector<std::string> splitLine(const std::string &line) {
        std::vector<std::string> out;
        std::string cur;
        for (char c : line) {
            if (c == ',') {
                out.push_back(cur);
                cur.clear();
            } else {
                cur.push_back(c);
            }
        }
        out.push_back(cur);
        return out;
    }

    std::string path_;
    std::ifstream in_;
    int lineNo_ = 0;
    size_t numColumns_ = 0;
};

} // namespace ridepool
