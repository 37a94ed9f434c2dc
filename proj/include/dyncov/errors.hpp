#pragma once

#include <stdexcept>
#include <string>

namespace dyncov {

// All library failures derive from Error. The category drives the CLI exit
// code: config -> 2, data -> 3, numeric -> 4.
class Error : public std::runtime_error {
public:
    enum class Category { config, data, numeric };

    Error(Category c, const std::string& what) : std::runtime_error(what), category_(c) {}
    Category category() const noexcept { return category_; }

private:
    Category category_;
};

class ConfigError : public Error {
public:
    explicit ConfigError(const std::string& msg) : Error(Category::config, "config error: " + msg) {}
};

class DataError : public Error {
public:
    explicit DataError(const std::string& msg) : Error(Category::data, "data error: " + msg) {}
};

// Local smoothing window holds too few (or degenerate) observations.
class DegenerateWindow : public Error {
public:
    explicit DegenerateWindow(const std::string& msg) : Error(Category::numeric, "degenerate window: " + msg) {}
};

class DimMismatch : public Error {
public:
    explicit DimMismatch(const std::string& msg) : Error(Category::data, "dimension mismatch: " + msg) {}
};

class EigFailure : public Error {
public:
    explicit EigFailure(const std::string& msg) : Error(Category::numeric, "eigensolver failure: " + msg) {}
};

class DegenerateDiagonal : public Error {
public:
    explicit DegenerateDiagonal(const std::string& msg)
        : Error(Category::numeric, "degenerate diagonal: " + msg) {}
};

class NotACovariance : public Error {
public:
    explicit NotACovariance(const std::string& msg) : Error(Category::numeric, "not a covariance: " + msg) {}
};

// A query time falls outside the hull of an estimated curve.
class MeanNotEvaluable : public Error {
public:
    explicit MeanNotEvaluable(const std::string& msg)
        : Error(Category::data, "mean curve not evaluable: " + msg) {}
};

class SingularSystem : public Error {
public:
    explicit SingularSystem(const std::string& msg) : Error(Category::numeric, "singular system: " + msg) {}
};

class AllCandidatesDegenerate : public Error {
public:
    explicit AllCandidatesDegenerate(const std::string& msg)
        : Error(Category::numeric, "all candidates degenerate: " + msg) {}
};

class InvalidDesign : public Error {
public:
    explicit InvalidDesign(const std::string& msg) : Error(Category::config, "invalid design: " + msg) {}
};

class GridTooCoarse : public Error {
public:
    explicit GridTooCoarse(const std::string& msg) : Error(Category::config, "grid too coarse: " + msg) {}
};

class RankDeficient : public Error {
public:
    explicit RankDeficient(const std::string& msg) : Error(Category::numeric, "rank deficient: " + msg) {}
};

}  // namespace dyncov
