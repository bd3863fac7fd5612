// Copyright (c) the spectral-count contributors.
// SPDX-License-Identifier: Apache-2.0

#include "spectral/csv.hpp"

#include <charconv>
#include <fstream>
#include <stdexcept>

namespace spectral {

std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
    if (res.ec != std::errc())
        throw std::runtime_error("format_double: conversion failed");
    return std::string(buf, res.ptr);
}

CsvTable::CsvTable(std::vector<std::string> header) : header_(std::move(header)) {
    if (header_.empty()) throw std::invalid_argument("csv: empty header");
}

void CsvTable::add_row(std::vector<std::string> cells) {
    if (cells.size() != header_.size())
        throw std::invalid_argument("csv: row width does not match header");
    rows_.push_back(std::move(cells));
}

std::string CsvTable::to_string() const {
    std::string out;
    auto emit = [&out](const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) out.push_back(',');
            out += cells[i];
        }
        out.push_back('\n');
    };
    emit(header_);
    for (const auto& row : rows_) emit(row);
    return out;
}

void CsvTable::write_file(const std::string& path) const {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("csv: cannot open " + path + " for writing");
    const std::string body = to_string();
    f.write(body.data(), static_cast<std::streamsize>(body.size()));
    if (!f) throw std::runtime_error("csv: write failed for " + path);
}

}  // namespace spectral
