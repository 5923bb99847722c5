//! Closed label schemes shared by classifiers, reasoner and metrics.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

macro_rules! label_enum {
    (
        $(#[$meta:meta])*
        $name:ident { $($(#[$vmeta:meta])* $variant:ident => $text:literal),+ $(,)? }
    ) => {
        $(#[$meta])*
        #[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
        pub enum $name {
            $($(#[$vmeta])* #[serde(rename = $text)] $variant),+
        }

        impl $name {
            /// Every value in declaration order.
            pub const ALL: &'static [$name] = &[$($name::$variant),+];

            pub fn as_str(self) -> &'static str {
                match self {
                    $($name::$variant => $text),+
                }
            }

            /// Position in declaration order.
            pub fn index(self) -> usize {
                Self::ALL.iter().position(|v| *v == self).expect("declared variant")
            }
        }

        impl FromStr for $name {
            type Err = String;

            fn from_str(s: &str) -> Result<Self, Self::Err> {
                match s {
                    $($text => Ok($name::$variant),)+
                    _ => Err(format!(concat!("unknown ", stringify!($name), " {:?}"), s)),
                }
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(self.as_str())
            }
        }
    };
}

label_enum! {
    /// Sentence-level emotion labels plus the exclusive `no-emotion`.
    EmotionLabel {
        Information => "information",
        Annoyance => "annoyance",
        Appreciation => "appreciation",
        DisapprovalCritique => "disapproval/critique",
        Interest => "interest",
        Anticipation => "anticipation",
        Excitement => "excitement",
        Challenged => "challenged",
        Confidence => "confidence",
        Disappointment => "disappointment",
        Insecurity => "insecurity",
        Motivation => "motivation",
        Optimism => "optimism",
        Responsibility => "responsibility",
        Satisfaction => "satisfaction",
        Surprise => "surprise",
        Uncertainty => "uncertainty",
        Wariness => "wariness",
        NoEmotion => "no-emotion",
    }
}

label_enum! {
    /// Phases of the Gibbs reflective cycle.
    GibbsPhase {
        Description => "description",
        Feelings => "feelings",
        Evaluation => "evaluation",
        Analysis => "analysis",
        Conclusion => "conclusion",
        FuturePlans => "future_plans",
    }
}

label_enum! {
    SentimentPolarity {
        Positive => "positive",
        Negative => "negative",
        Neutral => "neutral",
    }
}

label_enum! {
    /// Which topic catalog to assign against.
    #[derive(Default)]
    ClusteringId {
        #[default]
        PedagogySpecific => "pedagogy_specific",
        GeneralEducational => "general_educational",
    }
}

label_enum! {
    /// Entries of the sentiment lexicon.
    SentimentCue {
        Positive => "positive",
        Negative => "negative",
        Negator => "negator",
    }
}

label_enum! {
    /// Entries of the reflective-level lexicon.
    LevelCue {
        Contrast => "contrast",
        WiderContext => "wider_context",
    }
}

/// Depth of reflection, ordered from plain description (1) to critical
/// reflection (5).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "u8", try_from = "u8")]
pub enum ReflectiveLevel {
    Description = 1,
    ReflectiveDescription = 2,
    DialogicalReflection = 3,
    TransformativeReflection = 4,
    CriticalReflection = 5,
}

impl ReflectiveLevel {
    pub const ALL: [ReflectiveLevel; 5] = [
        ReflectiveLevel::Description,
        ReflectiveLevel::ReflectiveDescription,
        ReflectiveLevel::DialogicalReflection,
        ReflectiveLevel::TransformativeReflection,
        ReflectiveLevel::CriticalReflection,
    ];

    pub fn ordinal(self) -> u8 {
        self as u8
    }

    pub fn from_ordinal(n: u8) -> Option<Self> {
        Self::ALL.get(usize::from(n).checked_sub(1)?).copied()
    }

    /// The next level up, saturating at critical reflection.
    pub fn next(self) -> Self {
        Self::from_ordinal(self.ordinal() + 1).unwrap_or(ReflectiveLevel::CriticalReflection)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            ReflectiveLevel::Description => "description",
            ReflectiveLevel::ReflectiveDescription => "reflective_description",
            ReflectiveLevel::DialogicalReflection => "dialogical_reflection",
            ReflectiveLevel::TransformativeReflection => "transformative_reflection",
            ReflectiveLevel::CriticalReflection => "critical_reflection",
        }
    }
}

impl From<ReflectiveLevel> for u8 {
    fn from(level: ReflectiveLevel) -> Self {
        level.ordinal()
    }
}

impl TryFrom<u8> for ReflectiveLevel {
    type Error = String;

    fn try_from(n: u8) -> Result<Self, Self::Error> {
        ReflectiveLevel::from_ordinal(n).ok_or_else(|| format!("reflective level {n} not in 1..=5"))
    }
}

impl fmt::Display for ReflectiveLevel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}
