// Starter content for the claim-template editor. The treatment-claims
// preset is kept byte-identical to the copy the service package ships;
// a test guards against drift.

export const TREATMENT_CLAIMS_PRESET = `{
  "templates": [
    {
      "pattern": "⟨x⟩",
      "bindings": {
        "x": [
          "hydroxychloroquine",
          "chloroquine"
        ]
      }
    },
    {
      "pattern": "⟨x⟩ is a cure for ⟨c⟩",
      "bindings": {
        "x": [
          "hydroxychloroquine",
          "chloroquine"
        ],
        "c": [
          "COVID",
          "the coronavirus"
        ]
      }
    },
    {
      "pattern": "Either hydroxychloroquine or chloroquine is a cure for ⟨c⟩",
      "bindings": {
        "c": [
          "COVID",
          "the coronavirus"
        ]
      }
    },
    {
      "pattern": "Either hydroxychloroquine or chloroquine is a cure for COVID or the coronavirus",
      "bindings": {}
    }
  ]
}
`;

export const PRESETS: { name: string; content: string }[] = [
  { name: "treatment claims", content: TREATMENT_CLAIMS_PRESET },
];
