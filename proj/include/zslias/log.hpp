#ifndef ZSLIAS_LOG_HPP
#define ZSLIAS_LOG_HPP

#include <cstdlib>
#include <iostream>
#include <string>

namespace zslias {

enum class LogLevel { kError = 0, kInfo = 1, kDebug = 2 };

inline LogLevel log_level() {
    static LogLevel level = [] {
        const char* env = std::getenv("ZSLIAS_LOG");
        if (!env) return LogLevel::kError;
        std::string s(env);
        if (s == "debug") return LogLevel::kDebug;
        if (s == "info") return LogLevel::kInfo;
        return LogLevel::kError;
    }();
    return level;
}

inline void log_warn(const std::string& msg) {
    if (log_level() >= LogLevel::kInfo) std::cerr << "[warn] " << msg << "\n";
}

inline void log_info(const std::string& msg) {
    if (log_level() >= LogLevel::kInfo) std::cerr << "[info] " << msg << "\n";
}

inline void log_debug(const std::string& msg) {
    if (log_level() >= LogLevel::kDebug) std::cerr << "[debug] " << msg << "\n";
}

} // namespace zslias

#endif
