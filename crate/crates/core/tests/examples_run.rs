// Every cargo example must run to completion.
macro_rules! example {
    ($name:ident) => {
        mod $name {
            include!(concat!("../examples/", stringify!($name), ".rs"));

            #[test]
            fn runs() {
                main();
            }
        }
    };
}

example!(trace_curves);
example!(intersections);
example!(pfaffian_chains);
example!(cutting);
example!(incidence_count);
example!(bounds);
example!(duality);
example!(generators);
example!(sweep);
example!(verify_bound);
