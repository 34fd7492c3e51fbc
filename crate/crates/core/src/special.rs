//! Error function family.
//!
//! Rational approximations following the classic FreeBSD msun `s_erf.c`
//! domain splitting (also used by Go and many ports). Accuracy is a few ulp
//! for `erf`/`erfc`; the scaled complement `erfcx(x) = exp(x^2) erfc(x)` is
//! provided because the vertical-overlap factor multiplies a growing Gaussian
//! by a shrinking complement and must not overflow on the way.

use crate::real::Real;

// erf(0.84375..1.25) correction base
const ERX: f64 = 8.450_629_115_104_675_292_97e-1;

// |x| < 0.84375: erf(x) = x + x*P(z)/Q(z), z = x^2
const PP: [f64; 5] = [
    1.283_791_670_955_125_585_61e-1,
    -3.250_421_072_470_014_993_70e-1,
    -2.848_174_957_559_851_047_66e-2,
    -5.770_270_296_489_441_591_57e-3,
    -2.376_301_665_665_016_260_84e-5,
];
const QQ: [f64; 5] = [
    3.979_172_239_591_553_528_19e-1,
    6.502_224_998_876_729_444_85e-2,
    5.081_306_281_875_765_627_76e-3,
    1.324_947_380_043_216_445_26e-4,
    -3.960_228_278_775_368_123_20e-6,
];

// 0.84375 <= |x| < 1.25: erf(x) = sign * (erx + P(s)/Q(s)), s = |x| - 1
const PA: [f64; 7] = [
    -2.362_118_560_752_659_440_77e-3,
    4.148_561_186_837_483_316_66e-1,
    -3.722_078_760_357_013_238_47e-1,
    3.183_466_199_011_617_536_74e-1,
    -1.108_946_942_823_966_774_76e-1,
    3.547_830_432_561_823_593_71e-2,
    -2.166_375_594_868_790_843_00e-3,
];
const QA: [f64; 6] = [
    1.064_208_804_008_442_282_86e-1,
    5.403_979_177_021_710_489_37e-1,
    7.182_865_441_419_626_628_68e-2,
    1.261_712_198_087_616_421_12e-1,
    1.363_708_391_202_905_073_62e-2,
    1.198_449_984_679_910_741_70e-2,
];

// 1.25 <= |x| < 1/0.35: erfc(x) = exp(-x^2 - 0.5625 + R(s)/S(s)) / x, s = 1/x^2
const RA: [f64; 8] = [
    -9.864_944_034_847_148_227_05e-3,
    -6.938_585_727_071_817_643_72e-1,
    -1.055_862_622_532_329_098_14e1,
    -6.237_533_245_032_600_603_96e1,
    -1.623_966_694_625_734_703_55e2,
    -1.846_050_929_067_110_359_94e2,
    -8.128_743_550_630_659_342_46e1,
    -9.814_329_344_169_145_485_92,
];
const SA: [f64; 8] = [
    1.965_127_166_743_925_712_92e1,
    1.376_577_541_435_190_426_00e2,
    4.345_658_774_752_292_288_21e2,
    6.453_872_717_332_678_803_36e2,
    4.290_081_400_275_678_333_86e2,
    1.086_350_055_417_794_351_34e2,
    6.570_249_770_319_281_701_35,
    -6.042_441_521_485_809_874_38e-2,
];

// |x| >= 1/0.35: same form with the RB/SB tables
const RB: [f64; 7] = [
    -9.864_942_924_700_099_285_97e-3,
    -7.992_832_376_805_230_065_74e-1,
    -1.775_795_491_775_475_198_89e1,
    -1.606_363_848_558_219_160_62e2,
    -6.375_664_433_683_896_277_22e2,
    -1.025_095_131_611_077_249_54e3,
    -4.835_191_916_086_513_970_19e2,
];
const SB: [f64; 7] = [
    3.033_806_074_348_245_829_24e1,
    3.257_925_129_965_739_188_26e2,
    1.536_729_586_084_436_959_94e3,
    3.199_858_219_508_595_539_08e3,
    2.553_050_406_433_164_425_83e3,
    4.745_285_412_069_553_672_15e2,
    -2.244_095_244_658_581_833_62e1,
];

fn poly<T: Real>(z: T, coefficients: &[f64]) -> T {
    let mut acc = T::zero();
    for &c in coefficients.iter().rev() {
        acc = acc * z + T::of(c);
    }
    acc
}

/// Exponent and rational correction shared by the `erfc` tail regions.
fn tail_ratio<T: Real>(ax: T) -> T {
    let s = T::one() / (ax * ax);
    if ax < T::of(1.0 / 0.35) {
        poly(s, &RA) / (T::one() + s * poly(s, &SA))
    } else {
        poly(s, &RB) / (T::one() + s * poly(s, &SB))
    }
}

/// Error function.
pub fn erf<T: Real>(x: T) -> T {
    if x.is_nan() {
        return x;
    }
    let ax = x.abs();
    let sign = if x < T::zero() { -T::one() } else { T::one() };

    if ax < T::of(0.84375) {
        if ax < T::of(3.7e-9) {
            // erf(x) ~ (2/sqrt(pi)) x for subnormal-scale arguments
            return x * T::of(std::f64::consts::FRAC_2_SQRT_PI);
        }
        let z = x * x;
        let r = poly(z, &PP) / (T::one() + z * poly(z, &QQ));
        return x + x * r;
    }
    if ax < T::of(1.25) {
        let s = ax - T::one();
        let p = poly(s, &PA);
        let q = T::one() + s * poly(s, &QA);
        return sign * (T::of(ERX) + p / q);
    }
    if ax >= T::of(6.0) {
        // |erfc| < 2^-75 here, erf saturates at this precision
        return sign * (T::one() - T::of(1e-300));
    }
    let r = (-ax * ax - T::of(0.5625) + tail_ratio(ax)).exp() / ax;
    sign * (T::one() - r)
}

/// Complementary error function `1 - erf(x)`.
pub fn erfc<T: Real>(x: T) -> T {
    if x.is_nan() {
        return x;
    }
    let ax = x.abs();

    if ax < T::of(0.84375) {
        let z = x * x;
        let r = poly(z, &PP) / (T::one() + z * poly(z, &QQ));
        // keep precision where erfc is close to 1/2
        return if x < T::of(0.25) {
            T::one() - (x + x * r)
        } else {
            T::of(0.5) + (T::of(0.5) - x) - x * r
        };
    }
    if ax < T::of(1.25) {
        let s = ax - T::one();
        let p = poly(s, &PA);
        let q = T::one() + s * poly(s, &QA);
        return if x >= T::zero() {
            T::one() - T::of(ERX) - p / q
        } else {
            T::one() + T::of(ERX) + p / q
        };
    }
    if ax >= T::of(28.0) {
        return if x > T::zero() {
            T::of(1e-300) * T::of(1e-300)
        } else {
            T::of(2.0) - T::of(1e-300)
        };
    }
    let r = (-ax * ax - T::of(0.5625) + tail_ratio(ax)).exp() / ax;
    if x > T::zero() {
        r
    } else {
        T::of(2.0) - r
    }
}

/// Scaled complementary error function `exp(x^2) erfc(x)`.
///
/// Stays finite for arbitrarily large positive `x` (asymptotically
/// `1/(x sqrt(pi))`). For negative `x` it grows like `2 exp(x^2)` and
/// overflows near `x = -26.6`, as the true function does.
pub fn erfcx<T: Real>(x: T) -> T {
    if x.is_nan() {
        return x;
    }
    if x >= T::of(1.25) {
        // exp(x^2) cancels against the erfc tail exactly
        return (-T::of(0.5625) + tail_ratio(x)).exp() / x;
    }
    if x > T::of(-26.0) {
        return (x * x).exp() * erfc(x);
    }
    T::infinity()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// Independent oracle: Maclaurin series, accurate to ~1e-15 for |x| <= 2.
    fn erf_series(x: f64) -> f64 {
        let mut term = x;
        let mut sum = x;
        for n in 1..60 {
            let n = n as f64;
            term *= -x * x / n;
            sum += term / (2.0 * n + 1.0);
        }
        sum * 2.0 / std::f64::consts::PI.sqrt()
    }

    #[test]
    fn zero_and_unity() {
        assert_eq!(erf(0.0f64), 0.0);
        assert!((erf(1.0f64) - 0.842_700_792_949_714_9).abs() < 1e-12);
    }

    #[test]
    fn matches_series_oracle() {
        for i in 0..=80 {
            let x = -2.0 + 0.05 * i as f64;
            assert!(
                (erf(x) - erf_series(x)).abs() <= 1e-12,
                "x={x}: {} vs {}",
                erf(x),
                erf_series(x)
            );
        }
    }

    #[test]
    fn saturates_at_large_argument() {
        assert!((erf(6.5f64) - 1.0).abs() < 1e-12);
        assert!((erf(-8.0f64) + 1.0).abs() < 1e-12);
        assert!((erf(300.0f64) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn erfc_complements_erf() {
        for i in 0..=60 {
            let x = -3.0 + 0.1 * i as f64;
            assert!((erf(x) + erfc(x) - 1.0).abs() < 1e-14, "x={x}");
        }
    }

    #[test]
    fn erfc_deep_tail() {
        // erfc(10) from the asymptotic series: 2.0884875837625447e-45
        let v: f64 = erfc(10.0);
        assert!(
            (v / 2.088_487_583_762_544_7e-45 - 1.0).abs() < 1e-10,
            "got {v:e}"
        );
    }

    #[test]
    fn erfcx_consistent_with_erfc() {
        for i in 0..=50 {
            let x = 0.1 * i as f64;
            let direct = erfcx(x);
            let via_erfc = (x * x).exp() * erfc(x);
            assert!(
                (direct / via_erfc - 1.0).abs() < 1e-12,
                "x={x}: {direct} vs {via_erfc}"
            );
        }
    }

    #[test]
    fn erfcx_large_argument_asymptote() {
        // erfcx(x) -> 1/(x sqrt(pi)) (1 - 1/(2x^2) + ...)
        let x = 1.0e4f64;
        let lead = 1.0 / (x * std::f64::consts::PI.sqrt());
        let expected = lead * (1.0 - 0.5 / (x * x));
        assert!((erfcx(x) / expected - 1.0).abs() < 1e-10);
        assert!(erfcx(50.0f64).is_finite());
    }

    #[test]
    fn single_precision_instantiation() {
        assert!((erf(1.0f32) - 0.842_700_8f32).abs() < 1e-6);
    }

    proptest! {
        #[test]
        fn odd_symmetry(x in -30.0f64..30.0) {
            prop_assert!((erf(x) + erf(-x)).abs() <= 1e-15);
        }

        #[test]
        fn bounded_and_monotone(x in -10.0f64..10.0, dx in 1e-6f64..1.0) {
            prop_assert!(erf(x).abs() <= 1.0);
            prop_assert!(erf(x + dx) >= erf(x));
        }
    }
}
