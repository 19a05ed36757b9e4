macro_rules! example {
    ($name:ident) => {
        #[allow(dead_code)]
        mod $name {
            include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/", stringify!($name), ".rs"));
        }

        #[test]
        fn $name() {
            $name::run_example();
        }
    };
}

example!(hyperbolic_primitives);
example!(schottky_certificate);
example!(word_orbits);
example!(extremal_gamma2);
example!(bound_table);
example!(monte_carlo_falsification);
example!(margulis_constant);
example!(sharpness);
example!(kernel_integral);
example!(trig_chain);
example!(patterson_sullivan);
example!(buser_loops);
