//! Failure times (days) of 194 aircraft devices; 11 right-censored.
//!
//! Transcribed row by row from the published table (13 rows of 14 values
//! plus a final row of 12). Entries marked `+` in the table are censored.
//! The table typesetting is cramped in a few cells (e.g. `3& 11` in row 11
//! and `31 &10` in row 12); these were read as separate values.

use crate::LifetimeData;

/// (time, event) pairs in table order; `false` marks a censored entry.
const AIRCRAFT: [(f64, bool); 194] = {
    const C: bool = false;
    const E: bool = true;
    [
        (43.0, E),
        (29.0, E),
        (37.0, E),
        (88.0, E),
        (5.0, E),
        (14.0, E),
        (9.0, E),
        (43.0, C),
        (1.0, E),
        (78.0, E),
        (1.0, E),
        (77.0, E),
        (17.0, E),
        (100.0, E),
        (3.0, E),
        (119.0, C),
        (22.0, E),
        (3.0, E),
        (8.0, E),
        (80.0, E),
        (1.0, E),
        (19.0, E),
        (157.0, C),
        (65.0, E),
        (34.0, E),
        (13.0, E),
        (62.0, C),
        (2.0, E),
        (1.0, E),
        (1.0, E),
        (2.0, E),
        (3.0, E),
        (6.0, E),
        (1.0, E),
        (2.0, E),
        (5.0, E),
        (7.0, E),
        (6.0, E),
        (1.0, E),
        (1.0, E),
        (4.0, E),
        (1.0, E),
        (1.0, E),
        (1.0, E),
        (2.0, E),
        (7.0, E),
        (2.0, E),
        (1.0, E),
        (1.0, E),
        (2.0, E),
        (1.0, E),
        (1.0, E),
        (7.0, E),
        (1.0, E),
        (1.0, E),
        (4.0, E),
        (1.0, E),
        (4.0, E),
        (2.0, E),
        (4.0, E),
        (5.0, E),
        (5.0, E),
        (4.0, E),
        (3.0, E),
        (2.0, E),
        (2.0, E),
        (2.0, E),
        (3.0, E),
        (3.0, E),
        (9.0, E),
        (1.0, E),
        (6.0, E),
        (9.0, E),
        (2.0, E),
        (5.0, E),
        (7.0, E),
        (4.0, E),
        (2.0, E),
        (1.0, E),
        (2.0, E),
        (2.0, E),
        (3.0, E),
        (11.0, E),
        (8.0, E),
        (3.0, E),
        (1.0, E),
        (2.0, E),
        (2.0, E),
        (2.0, E),
        (2.0, E),
        (2.0, E),
        (1.0, E),
        (3.0, E),
        (20.0, C),
        (8.0, E),
        (8.0, E),
        (197.0, E),
        (20.0, E),
        (14.0, E),
        (7.0, E),
        (29.0, E),
        (7.0, E),
        (16.0, E),
        (34.0, E),
        (25.0, E),
        (10.0, E),
        (80.0, E),
        (42.0, E),
        (32.0, E),
        (1.0, E),
        (3.0, E),
        (1.0, E),
        (12.0, E),
        (7.0, E),
        (7.0, E),
        (39.0, C),
        (60.0, E),
        (53.0, E),
        (32.0, E),
        (9.0, E),
        (8.0, E),
        (1.0, E),
        (1.0, E),
        (27.0, E),
        (2.0, E),
        (4.0, E),
        (8.0, E),
        (13.0, E),
        (7.0, E),
        (7.0, E),
        (1.0, E),
        (19.0, E),
        (7.0, E),
        (12.0, E),
        (19.0, E),
        (5.0, E),
        (18.0, E),
        (1.0, E),
        (4.0, E),
        (18.0, E),
        (20.0, E),
        (9.0, E),
        (14.0, E),
        (13.0, E),
        (70.0, E),
        (18.0, E),
        (3.0, E),
        (7.0, E),
        (20.0, E),
        (3.0, E),
        (11.0, E),
        (10.0, E),
        (3.0, E),
        (38.0, C),
        (278.0, E),
        (13.0, E),
        (79.0, E),
        (145.0, C),
        (19.0, E),
        (2.0, E),
        (18.0, E),
        (2.0, E),
        (65.0, E),
        (14.0, E),
        (31.0, E),
        (10.0, E),
        (19.0, E),
        (5.0, E),
        (9.0, E),
        (45.0, E),
        (13.0, E),
        (5.0, E),
        (1.0, E),
        (1.0, E),
        (31.0, E),
        (35.0, E),
        (34.0, E),
        (4.0, E),
        (3.0, E),
        (5.0, E),
        (12.0, E),
        (140.0, C),
        (106.0, E),
        (5.0, E),
        (40.0, E),
        (130.0, C),
        (21.0, E),
        (19.0, E),
        (7.0, E),
        (10.0, E),
        (91.0, E),
        (193.0, E),
        (64.0, E),
        (85.0, C),
    ]
};

/// The aircraft device failure-time dataset.
pub fn aircraft() -> LifetimeData {
    let (times, events) = AIRCRAFT.iter().copied().unzip();
    LifetimeData::new(times, events).expect("fixture is valid")
}
