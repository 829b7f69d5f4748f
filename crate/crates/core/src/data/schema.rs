use super::DataError;

/// Labels of the crop-rotation categorical column, in code order (0, 1, 2).
pub const CROP_ROTATION_LEVELS: [&str; 3] =
    ["continuous_corn", "corn_soybean", "corn_soybean_wheat"];

/// Column type tag.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ColumnKind {
    Continuous,
    /// Integer-encoded categorical column; `levels[code]` is the label.
    Categorical { levels: Vec<String> },
}

/// Ordered column names, their kinds, and which columns are targets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FeatureSchema {
    names: Vec<String>,
    kinds: Vec<ColumnKind>,
    target_names: Vec<String>,
}

const DEFAULT_FEATURES: [&str; 16] = [
    "corn_yield",
    "soybean_yield",
    "wheat_yield",
    "soil_erodibility",
    "clay",
    "silt",
    "sand",
    "organic_matter",
    "rainfall_erosivity",
    "slope",
    "slope_length",
    "k_factor",
    "crop_rotation",
    "residue_removal",
    "noise_1",
    "noise_2",
];

const DEFAULT_TARGETS: [&str; 4] = ["SEF", "SCI", "OMF", "RRR"];

impl FeatureSchema {
    pub fn new(
        names: Vec<String>,
        kinds: Vec<ColumnKind>,
        target_names: Vec<String>,
    ) -> Result<Self, DataError> {
        if names.len() != kinds.len() {
            return Err(DataError::InvalidSchema(format!(
                "{} names but {} kinds",
                names.len(),
                kinds.len()
            )));
        }
        for (i, n) in names.iter().enumerate() {
            if n.is_empty() {
                return Err(DataError::InvalidSchema("empty column name".into()));
            }
            if names[..i].contains(n) {
                return Err(DataError::InvalidSchema(format!("duplicate column `{n}`")));
            }
        }
        for t in &target_names {
            if !names.contains(t) {
                return Err(DataError::InvalidSchema(format!(
                    "target `{t}` is not a column"
                )));
            }
        }
        Ok(Self {
            names,
            kinds,
            target_names,
        })
    }

    /// The 16 feature columns followed by the SEF, SCI, OMF and RRR targets.
    pub fn default_schema() -> Self {
        let mut names: Vec<String> = DEFAULT_FEATURES.iter().map(|s| s.to_string()).collect();
        let mut kinds: Vec<ColumnKind> = DEFAULT_FEATURES
            .iter()
            .map(|&n| {
                if n == "crop_rotation" {
                    ColumnKind::Categorical {
                        levels: CROP_ROTATION_LEVELS.iter().map(|s| s.to_string()).collect(),
                    }
                } else {
                    ColumnKind::Continuous
                }
            })
            .collect();
        names.extend(DEFAULT_TARGETS.iter().map(|s| s.to_string()));
        kinds.extend(DEFAULT_TARGETS.iter().map(|_| ColumnKind::Continuous));
        let targets = DEFAULT_TARGETS.iter().map(|s| s.to_string()).collect();
        Self::new(names, kinds, targets).expect("default schema is valid")
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn kinds(&self) -> &[ColumnKind] {
        &self.kinds
    }

    pub fn target_names(&self) -> &[String] {
        &self.target_names
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn is_target(&self, name: &str) -> bool {
        self.target_names.iter().any(|t| t == name)
    }

    /// Non-target column names in schema order.
    pub fn feature_names(&self) -> Vec<&str> {
        self.names
            .iter()
            .filter(|n| !self.is_target(n))
            .map(String::as_str)
            .collect()
    }
}
