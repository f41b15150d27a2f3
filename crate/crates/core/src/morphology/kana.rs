//! Gojūon rows for the final kana of Regular I verbs.

/// Vowel row of the kana grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Row {
    A,
    I,
    U,
    E,
    O,
}

// (a, i, u, e, o) for each consonant column that can end a dictionary form.
// The a-row of the w/vowel column is わ, not あ (会う -> 会わない).
const COLUMNS: [[char; 5]; 9] = [
    ['わ', 'い', 'う', 'え', 'お'],
    ['か', 'き', 'く', 'け', 'こ'],
    ['が', 'ぎ', 'ぐ', 'げ', 'ご'],
    ['さ', 'し', 'す', 'せ', 'そ'],
    ['た', 'ち', 'つ', 'て', 'と'],
    ['な', 'に', 'ぬ', 'ね', 'の'],
    ['ば', 'び', 'ぶ', 'べ', 'ぼ'],
    ['ま', 'み', 'む', 'め', 'も'],
    ['ら', 'り', 'る', 'れ', 'ろ'],
];

/// Shifts a u-row kana into another row of the same column.
/// Returns `None` if `kana` is not a u-row kana that can end a verb.
pub fn shift(kana: char, row: Row) -> Option<char> {
    let column = COLUMNS.iter().find(|c| c[Row::U as usize] == kana)?;
    Some(column[row as usize])
}

pub fn is_verb_final(kana: char) -> bool {
    COLUMNS.iter().any(|c| c[Row::U as usize] == kana)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shifts_rows() {
        assert_eq!(shift('く', Row::A), Some('か'));
        assert_eq!(shift('う', Row::A), Some('わ'));
        assert_eq!(shift('る', Row::E), Some('れ'));
        assert_eq!(shift('む', Row::O), Some('も'));
        assert_eq!(shift('か', Row::A), None);
    }
}
