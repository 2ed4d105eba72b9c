//! Shipped defaults for the three ACOS datasets.

use std::fmt;
use std::str::FromStr;

use crate::category::CategoryMap;
use crate::error::{Error, Result};
use crate::scl::SclConfig;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DatasetKind {
    Rest,
    Laptop,
    LaptopL1,
}

const REST_CATEGORIES: &str = include_str!("../../../configs/categories/rest.tsv");
const LAPTOP_CATEGORIES: &str = include_str!("../../../configs/categories/laptop.tsv");
const LAPTOP_L1_CATEGORIES: &str = include_str!("../../../configs/categories/laptop_l1.tsv");
const REST_SCL: &str = include_str!("../../../configs/rest.conf");
const LAPTOP_SCL: &str = include_str!("../../../configs/laptop.conf");
const LAPTOP_L1_SCL: &str = include_str!("../../../configs/laptop_l1.conf");

impl DatasetKind {
    pub const ALL: [DatasetKind; 3] = [DatasetKind::Rest, DatasetKind::Laptop, DatasetKind::LaptopL1];

    pub fn as_str(self) -> &'static str {
        match self {
            DatasetKind::Rest => "rest",
            DatasetKind::Laptop => "laptop",
            DatasetKind::LaptopL1 => "laptop-l1",
        }
    }

    /// Size of the dataset's category inventory.
    pub fn num_categories(self) -> usize {
        match self {
            DatasetKind::Rest => 13,
            DatasetKind::Laptop => 121,
            DatasetKind::LaptopL1 => 21,
        }
    }

    pub fn category_map(self) -> CategoryMap {
        let src = match self {
            DatasetKind::Rest => REST_CATEGORIES,
            DatasetKind::Laptop => LAPTOP_CATEGORIES,
            DatasetKind::LaptopL1 => LAPTOP_L1_CATEGORIES,
        };
        CategoryMap::from_tsv(src).expect("shipped category map is valid")
    }

    pub fn scl_config(self) -> SclConfig {
        let src = match self {
            DatasetKind::Rest => REST_SCL,
            DatasetKind::Laptop => LAPTOP_SCL,
            DatasetKind::LaptopL1 => LAPTOP_L1_SCL,
        };
        SclConfig::from_kv(src).expect("shipped config is valid")
    }
}

impl fmt::Display for DatasetKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for DatasetKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace('_', "-").as_str() {
            "rest" | "restaurant" => Ok(DatasetKind::Rest),
            "laptop" => Ok(DatasetKind::Laptop),
            "laptop-l1" => Ok(DatasetKind::LaptopL1),
            _ => Err(Error::Config(format!("unknown dataset {s:?}"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::category::mechanical_description;

    #[test]
    fn shipped_configs() {
        assert_eq!(DatasetKind::Rest.scl_config().alpha, [0.05; 3]);
        assert_eq!(DatasetKind::Laptop.scl_config().alpha, [0.05; 3]);
        assert_eq!(DatasetKind::LaptopL1.scl_config().alpha, [0.005; 3]);
        for k in DatasetKind::ALL {
            let c = k.scl_config();
            assert_eq!((c.tau, c.dropout_p), (0.25, 0.1));
        }
    }

    #[test]
    fn shipped_category_maps() {
        let rest = DatasetKind::Rest.category_map();
        assert_eq!(rest.len(), 13);
        assert_eq!(rest.describe("LOCATION#GENERAL").unwrap(), "the location");
        assert_eq!(rest.describe("FOOD#PRICES").unwrap(), "the food prices");
        assert_eq!(rest.describe("FOOD#QUALITY").unwrap(), "the food quality");

        let laptop = DatasetKind::Laptop.category_map();
        assert_eq!(laptop.describe("OS#GENERAL").unwrap(), "the operating system overall");
        assert_eq!(laptop.describe("OS#DESIGN_FEATURES").unwrap(), "the operating system features");
        assert_eq!(laptop.describe("HARD_DISC#PRICE").unwrap(), "the hard drive price");
        assert!(laptop.len() >= 121);
        for (raw, desc) in laptop.iter() {
            assert_eq!(desc, mechanical_description(raw), "{raw}");
        }

        let l1 = DatasetKind::LaptopL1.category_map();
        assert_eq!(l1.describe("OS").unwrap(), "the operating system");
        assert_eq!(l1.describe("HARD_DISC").unwrap(), "the hard drive");
        assert!(l1.len() >= 21);
    }
}
