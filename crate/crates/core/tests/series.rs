use exrot::hermite::{gaussian_pdf_1d, gca_density, GcaSeries};
use exrot::mixture::{marron_wand, mixture_sample, SampleSet};
use exrot::quadrature::{integrate, integrate_2d};
use exrot::stats::{cumulants_1d, CumulantVectors};

#[test]
fn zero_cumulants_give_the_normal_density() {
    let c = exrot::stats::Cumulants1D { n: 10, mean: 0.5, sigma: 2.0, k3: 0.0, k4: 0.0 };
    let s = GcaSeries::from(&c);
    for &x in &[-3.0, 0.5, 1.7] {
        let g = gca_density(&[x], &s, 4).unwrap();
        assert!((g - gaussian_pdf_1d(x, 0.5, 2.0)).abs() < 1e-14);
    }
}

#[test]
fn univariate_series_has_unit_mass_and_moments() {
    let sample = mixture_sample(&marron_wand(2).unwrap(), 5000, 1).unwrap();
    let c = cumulants_1d(sample.values()).unwrap();
    let s = GcaSeries::from(&c);
    let (a, b) = (c.mean - 12.0 * c.sigma, c.mean + 12.0 * c.sigma);
    let f = |x: f64| gca_density(&[x], &s, 4).unwrap();
    let mass = integrate(f, a, b, 1e-12, 1e-12).unwrap().value;
    assert!((mass - 1.0).abs() < 1e-9);
    let mean = integrate(|x| x * f(x), a, b, 1e-12, 1e-12).unwrap().value;
    assert!((mean - c.mean).abs() < 1e-9);
    let m3 = integrate(|x| (x - c.mean).powi(3) * f(x), a, b, 1e-12, 1e-12).unwrap().value;
    assert!((m3 - c.k3).abs() < 1e-8);
}

#[test]
fn bivariate_series_has_unit_mass() {
    let rows: Vec<Vec<f64>> = {
        let x = mixture_sample(&marron_wand(2).unwrap(), 3000, 8).unwrap();
        let y = mixture_sample(&marron_wand(4).unwrap(), 3000, 9).unwrap();
        x.values().iter().zip(y.values()).map(|(&a, &b)| vec![a, 0.3 * a + b]).collect()
    };
    let (cv, _) = CumulantVectors::from_sample(&SampleSet::from_rows(&rows).unwrap()).unwrap();
    let s = GcaSeries::from(&cv);
    let mass = integrate_2d(|x, y| gca_density(&[x, y], &s, 4).unwrap(), (-10.0, 10.0), (-10.0, 10.0), 1e-10, 1e-10)
        .unwrap()
        .value;
    assert!((mass - 1.0).abs() < 1e-7, "{mass}");
}
