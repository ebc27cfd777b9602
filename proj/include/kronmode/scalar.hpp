#pragma once

#include <cmath>
#include <complex>
#include <type_traits>

namespace kronmode {

template <typename T>
struct is_complex : std::false_type {};
template <typename T>
struct is_complex<std::complex<T>> : std::true_type {};
template <typename T>
inline constexpr bool is_complex_v = is_complex<T>::value;

template <typename T>
struct real_type {
    using type = T;
};
template <typename T>
struct real_type<std::complex<T>> {
    using type = T;
};
/// Underlying real type: double for std::complex<double>, float for float, ...
template <typename T>
using real_t = typename real_type<T>::type;

/// Result scalar of mixing two operands: real x complex promotes to complex,
/// float x double promotes to double.
template <typename A, typename B>
struct promote {
    using real = decltype(real_t<A>{} * real_t<B>{});
    using type = std::conditional_t<is_complex_v<A> || is_complex_v<B>, std::complex<real>, real>;
};
template <typename A, typename B>
using promote_t = typename promote<A, B>::type;

template <typename T>
concept Scalar = std::is_floating_point_v<T> ||
                 (is_complex_v<T> && std::is_floating_point_v<real_t<T>>);

template <Scalar T>
[[nodiscard]] inline T conj_if_complex(T x) {
    if constexpr (is_complex_v<T>) {
        return std::conj(x);
    } else {
        return x;
    }
}

template <Scalar T>
[[nodiscard]] inline real_t<T> abs2(T x) {
    if constexpr (is_complex_v<T>) {
        return x.real() * x.real() + x.imag() * x.imag();
    } else {
        return x * x;
    }
}

template <Scalar T>
[[nodiscard]] inline bool is_finite(T x) {
    if constexpr (is_complex_v<T>) {
        return std::isfinite(x.real()) && std::isfinite(x.imag());
    } else {
        return std::isfinite(x);
    }
}

/// Converts between scalar types; complex -> real keeps the real part.
template <Scalar To, Scalar From>
[[nodiscard]] inline To scalar_cast(From x) {
    if constexpr (is_complex_v<To> && is_complex_v<From>) {
        return To(static_cast<real_t<To>>(x.real()), static_cast<real_t<To>>(x.imag()));
    } else if constexpr (is_complex_v<To>) {
        return To(static_cast<real_t<To>>(x), real_t<To>{0});
    } else if constexpr (is_complex_v<From>) {
        return static_cast<To>(x.real());
    } else {
        return static_cast<To>(x);
    }
}

}  // namespace kronmode
