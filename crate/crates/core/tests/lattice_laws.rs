mod common;

use proptest::prelude::*;

use common::{rat, triple};
use ordtopo_core::{Carrier, Vector};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn sup_inf_laws((x, y, z) in triple()) {
        prop_assert_eq!(x.sup(&y).unwrap(), y.sup(&x).unwrap());
        prop_assert_eq!(x.inf(&y).unwrap(), y.inf(&x).unwrap());
        prop_assert_eq!(x.sup(&y).unwrap().sup(&z).unwrap(), x.sup(&y.sup(&z).unwrap()).unwrap());
        prop_assert_eq!(x.inf(&y).unwrap().inf(&z).unwrap(), x.inf(&y.inf(&z).unwrap()).unwrap());
        prop_assert_eq!(x.sup(&x).unwrap(), x.clone());
        prop_assert_eq!(x.inf(&x).unwrap(), x.clone());
        prop_assert_eq!(x.sup(&x.inf(&y).unwrap()).unwrap(), x.clone());
        prop_assert_eq!(x.inf(&x.sup(&y).unwrap()).unwrap(), x.clone());
        prop_assert_eq!(
            x.inf(&y.sup(&z).unwrap()).unwrap(),
            x.inf(&y).unwrap().sup(&x.inf(&z).unwrap()).unwrap()
        );
    }

    #[test]
    fn order_compatibility((x, y, z) in triple(), t in rat()) {
        let t = t.abs();
        if x.leq(&y).unwrap() {
            prop_assert!(x.add(&z).unwrap().leq(&y.add(&z).unwrap()).unwrap());
            prop_assert!(x.scale(&t).leq(&y.scale(&t)).unwrap());
        }
        prop_assert_eq!(x.add(&z).unwrap().sup(&y.add(&z).unwrap()).unwrap(), x.sup(&y).unwrap().add(&z).unwrap());
        prop_assert_eq!(x.scale(&t).sup(&y.scale(&t)).unwrap(), x.sup(&y).unwrap().scale(&t));
    }

    #[test]
    fn positive_negative_parts((x, _, _) in triple()) {
        prop_assert_eq!(x.pos().sub(&x.neg()).unwrap(), x.clone());
        prop_assert_eq!(x.pos().add(&x.neg()).unwrap(), x.abs());
        prop_assert!(x.pos().inf(&x.neg()).unwrap().is_zero());
    }

    #[test]
    fn canonical_form((x, y, _) in triple(), pad in 0usize..4) {
        prop_assert_eq!(x.normalize().normalize(), x.normalize());
        if x.carrier() == Carrier::TailSeq {
            // spelling out tail entries in the prefix gives the same vector
            let t = x.tail().unwrap().clone();
            let mut prefix = x.coords().to_vec();
            prefix.extend(std::iter::repeat_n(t.clone(), pad));
            let padded = Vector::tail_seq(prefix, t);
            prop_assert_eq!(&padded, &x);
            prop_assert_eq!(padded.sup(&y).unwrap(), x.sup(&y).unwrap());
            prop_assert_eq!(padded.leq(&y).unwrap(), x.leq(&y).unwrap());
        }
    }
}
