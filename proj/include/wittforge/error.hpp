#pragma once
#include <stdexcept>
#include <string>

namespace wf {

enum class ErrorKind { Syntax, Grading, Domain, Unsupported, Internal };

class Error : public std::runtime_error {
public:
    Error(ErrorKind k, const std::string& msg) : std::runtime_error(msg), kind_(k) {}
    ErrorKind kind() const { return kind_; }
private:
    ErrorKind kind_;
};

// singular Gram matrices report the dimension of the radical
class RankError : public Error {
public:
    RankError(int radical, const std::string& msg)
        : Error(ErrorKind::Domain, msg), radical_dim(radical) {}
    int radical_dim;
};

[[noreturn]] inline void syntax_error(const std::string& m) { throw Error(ErrorKind::Syntax, m); }
[[noreturn]] inline void grading_error(const std::string& m) { throw Error(ErrorKind::Grading, m); }
[[noreturn]] inline void domain_error(const std::string& m) { throw Error(ErrorKind::Domain, m); }
[[noreturn]] inline void internal_error(const std::string& m) { throw Error(ErrorKind::Internal, m); }
[[noreturn]] inline void unsupported(const std::string& m) { throw Error(ErrorKind::Unsupported, m); }

inline int exit_code(ErrorKind k) {
    switch (k) {
    case ErrorKind::Syntax:
    case ErrorKind::Grading: return 1;
    case ErrorKind::Domain:
    case ErrorKind::Unsupported: return 2;
    case ErrorKind::Internal: return 3;
    }
    return 3;
}

}
