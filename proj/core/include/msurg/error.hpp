// Error taxonomy. The CLI maps each class to a process exit code.
#pragma once

#include <stdexcept>
#include <string>

namespace msurg {

// Script structure problems: unknown command, bad parameters, pipeline
// order violations. Exit code 1.
struct ScriptError : std::runtime_error {
    explicit ScriptError(const std::string& msg) : std::runtime_error(msg) {}
};

// Geometric preconditions not met: degenerate plane, scalpel missing the
// mesh, tearing torn geometry, unstable integration step. Exit code 2.
struct GeometryError : std::runtime_error {
    explicit GeometryError(const std::string& msg) : std::runtime_error(msg) {}
};

// File system and parsing problems. Exit code 3.
struct IoError : std::runtime_error {
    explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

// Parse failure inside a structured text file; carries the line number.
struct FormatError : IoError {
    FormatError(const std::string& path, int line, const std::string& msg)
        : IoError(path + ":" + std::to_string(line) + ": " + msg), line_number(line) {}
    int line_number;
};

inline int exit_code_for(const std::exception& e) {
    if (dynamic_cast<const IoError*>(&e)) return 3;
    if (dynamic_cast<const GeometryError*>(&e)) return 2;
    if (dynamic_cast<const ScriptError*>(&e)) return 1;
    return 1;
}

}  // namespace msurg
