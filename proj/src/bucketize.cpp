#include "aliasfft/bucketize.hpp"

#include <stdexcept>

#include "aliasfft/fft.hpp"

namespace aliasfft {

SampleLedger::SampleLedger(std::size_t n) : touched_(n, 0) {}

void SampleLedger::record(std::size_t index) {
    auto& t = touched_.at(index);
    if (!t) {
        t = 1;
        ++unique_;
    }
    ++count_;
}

std::vector<std::size_t> SampleLedger::touched_indices() const {
    std::vector<std::size_t> out;
    out.reserve(unique_);
    for (std::size_t i = 0; i < touched_.size(); ++i)
        if (touched_[i]) out.push_back(i);
    return out;
}

std::size_t wrap_shift(std::int64_t tau, std::size_t n) {
    const auto nn = static_cast<std::int64_t>(n);
    std::int64_t r = tau % nn;
    if (r < 0) r += nn;
    return static_cast<std::size_t>(r);
}

Signal shift(const Signal& x, std::int64_t tau) {
    const std::size_t n = x.size();
    const std::size_t t = wrap_shift(tau, n);
    std::vector<cplx> out(n);
    for (std::size_t i = 0; i < n; ++i) out[(i + t) % n] = x[i];
    return Signal(std::move(out));
}

Signal downsample(const Signal& x, std::size_t l, SampleLedger* ledger) {
    if (l == 0 || x.size() % l != 0) throw std::invalid_argument("downsample: L must divide N");
    const std::size_t b = x.size() / l;
    std::vector<cplx> out(b);
    for (std::size_t j = 0; j < b; ++j) {
        out[j] = x[j * l];
        if (ledger) ledger->record(j * l);
    }
    return Signal(std::move(out));
}

FilteredSpectrum bucketize(const Signal& x, std::size_t b, std::int64_t tau, SampleLedger& ledger) {
    const std::size_t n = x.size();
    if (b == 0 || n % b != 0) throw std::invalid_argument("bucketize: B must divide N");
    if (ledger.n() != n) throw std::invalid_argument("bucketize: ledger size differs from signal");
    const std::size_t l = n / b;
    const std::size_t t = wrap_shift(tau, n);

    // (D_L S_τ x)_j = x_{(jL - τ) mod N}; the shift is an index map, no copy.
    std::vector<cplx> sub(b);
    for (std::size_t j = 0; j < b; ++j) {
        const std::size_t idx = (j * l + n - t) % n;
        sub[j] = x[idx];
        ledger.record(idx);
    }
    auto values = fft(sub);
    const double scale = 1.0 / double(b);
    for (auto& v : values) v *= scale;
    return FilteredSpectrum{b, tau, std::move(values)};
}

std::vector<FilteredSpectrum> bucketize_set(const Signal& x, std::size_t b, const ShiftSet& shifts,
                                            SampleLedger& ledger) {
    if (shifts.empty()) throw std::invalid_argument("bucketize_set: empty shift set");
    std::vector<FilteredSpectrum> out;
    out.reserve(shifts.size());
    for (auto tau : shifts) out.push_back(bucketize(x, b, tau, ledger));
    return out;
}

}  // namespace aliasfft
