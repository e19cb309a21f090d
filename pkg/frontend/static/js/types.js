/** Shared types mirroring the judgment service's JSON payloads. */
export const OPTION_IDS = [
    "first_better",
    "second_better",
    "both_fine",
    "both_bad",
];
