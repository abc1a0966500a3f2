#pragma once

#include <chrono>
#include <cstddef>
#include <sstream>
#include <string>
#include <vector>

#include "paracyc/linalg/sparse.hpp"

namespace paracyc {

enum class Status { pass, fail, skipped };

inline const char* status_name(Status s) {
    switch (s) {
        case Status::pass:
            return "pass";
        case Status::fail:
            return "fail";
        default:
            return "skipped";
    }
}

// One verified identity; anchor is the identity as a formula string.
struct CheckRecord {
    std::string name;
    std::string anchor;
    Status status = Status::pass;
    std::string scope;
    std::string witness;
};

inline std::string describe_diff(const MatrixDiff& d) {
    std::ostringstream os;
    os << "first difference at (row " << d.row << ", col " << d.col << "): lhs=" << d.lhs.str() << " rhs=" << d.rhs.str()
       << "; differing entries=" << d.differing_entries << "; max |numerator|=" << d.max_abs_numerator.get_str();
    return os.str();
}

// Collects check records for one suite.
class CheckLog {
public:
    CheckRecord& add(std::string name, std::string anchor, Status st, std::string scope = "", std::string witness = "") {
        records_.push_back({std::move(name), std::move(anchor), st, std::move(scope), std::move(witness)});
        return records_.back();
    }

    // Exact matrix equality lhs == rhs.
    bool expect_equal(const std::string& name, const std::string& anchor, const std::string& scope, const SparseMatrix& lhs,
                      const SparseMatrix& rhs) {
        if (lhs.rows() != rhs.rows() || lhs.cols() != rhs.cols()) {
            add(name, anchor, Status::fail, scope, "shape mismatch " + lhs.shape() + " vs " + rhs.shape());
            return false;
        }
        MatrixDiff d = compare(lhs, rhs);
        if (d.equal) {
            add(name, anchor, Status::pass, scope);
            return true;
        }
        add(name, anchor, Status::fail, scope, describe_diff(d));
        return false;
    }

    bool expect_zero(const std::string& name, const std::string& anchor, const std::string& scope, const SparseMatrix& m) {
        return expect_equal(name, anchor, scope, m, SparseMatrix::zero(m.rows(), m.cols()));
    }

    bool expect_true(const std::string& name, const std::string& anchor, const std::string& scope, bool ok,
                     const std::string& witness) {
        add(name, anchor, ok ? Status::pass : Status::fail, scope, ok ? "" : witness);
        return ok;
    }

    void merge(const CheckLog& other, const std::string& prefix = "") {
        for (auto r : other.records_) {
            if (!prefix.empty()) r.name = prefix + r.name;
            records_.push_back(std::move(r));
        }
    }

    const std::vector<CheckRecord>& records() const { return records_; }
    std::size_t failures() const {
        std::size_t n = 0;
        for (auto& r : records_) n += r.status == Status::fail;
        return n;
    }
    std::size_t passes() const {
        std::size_t n = 0;
        for (auto& r : records_) n += r.status == Status::pass;
        return n;
    }
    bool all_pass() const { return failures() == 0; }

private:
    std::vector<CheckRecord> records_;
};

class Stopwatch {
public:
    Stopwatch() : start_(std::chrono::steady_clock::now()) {}
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

private:
    std::chrono::steady_clock::time_point start_;
};

}  // namespace paracyc
