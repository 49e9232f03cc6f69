#include "refgen_bank.hpp"

namespace essaylens::refgen::bank {

const SharedBank& shared() {
  static const SharedBank b{
      // nouns
      {"school", "class", "teacher", "friend", "team", "project", "problem", "idea", "time", "day",
       "year", "life", "family", "world", "community", "experience", "skill", "lesson", "challenge", "goal",
       "question", "science", "math", "engineering", "robot", "code", "program", "computer", "book", "club",
       "competition", "people", "student", "way", "moment", "part", "work", "future", "college", "grade",
       "design", "bridge", "circuit", "machine", "experiment", "test", "answer", "plan", "mistake", "solution",
       "group", "game", "music", "language", "history", "physics", "chemistry", "biology", "model", "system",
       "city", "town", "home", "summer", "night", "morning", "week", "month", "result", "change"},
      // adjectives
      {"new", "first", "small", "difficult", "important", "simple", "different", "better", "real", "whole",
       "same", "best", "next", "own", "long", "young", "strong", "hard", "special", "open",
       "big", "old", "good", "great", "last", "high", "early", "clear", "quiet", "busy"},
      // adverbs
      {"again", "always", "never", "often", "still", "even", "just", "only", "soon", "finally"},
      // people
      {"friend", "teacher", "classmate", "coach", "mentor", "neighbor", "teammate", "family"},
      // places
      {"school", "classroom", "library", "lab", "workshop", "gym", "park", "city", "town", "office"},
      // verbs
      {{"learn", "learned"}, {"realize", "realized"}, {"build", "built"}, {"want", "wanted"}, {"decide", "decided"},
       {"begin", "began"}, {"make", "made"}, {"find", "found"}, {"understand", "understood"}, {"ask", "asked"},
       {"create", "created"}, {"design", "designed"}, {"join", "joined"}, {"lead", "led"}, {"teach", "taught"},
       {"change", "changed"}, {"start", "started"}, {"need", "needed"}, {"believe", "believed"}, {"solve", "solved"},
       {"test", "tested"}, {"write", "wrote"}, {"read", "read"}, {"spend", "spent"}, {"try", "tried"},
       {"see", "saw"}, {"think", "thought"}, {"take", "took"}, {"give", "gave"}, {"keep", "kept"}},
  };
  return b;
}

const StyleBank& human() {
  static const StyleBank b{
      // openers
      {"I still remember the {A} {N} my {R} gave me when I was {#}.",
       "When I was {#}, my {R} {P} me to the {L} and everything kind of started there.",
       "Honestly, I never thought a {N} would matter this much to me.",
       "Growing up, my {R} and I {P} a lot of time in the {L}.",
       "The summer I turned {#}, I got a job at the {L} and it was {A}.",
       "My {R} always says I ask too many questions, and she's probably right."},
      // body
      {"I {P} the {N} and it was {A}, but I kept going.",
       "My {R} {P} me how to {V} the {N} in the {L}.",
       "It wasn't {A} at first, I just {P} a lot and {P} again.",
       "We {P} the {N} together and it was {D} {A}.",
       "I got home late from my {N} and {P} on my {N} until midnight.",
       "That {N} was {A}, but I {P} it anyway.",
       "I {D} {P} that the {N} was more {A} than I thought.",
       "After my shift at the {L}, I'd {V} the {N} with my {R}.",
       "My {R} didn't have much money, so we {P} the {N} ourselves.",
       "I {P} my {N} in the {L} and my {R} laughed at me.",
       "Some days I was {A} and some days I was just tired.",
       "I'm not going to lie, the {N} was {D} {A}.",
       "We couldn't afford a {N}, so I {P} one out of stuff from the {L}.",
       "I kept {#} notes about the {N} taped to my wall.",
       "My {R} {P} every {N} I made, even the {A} ones.",
       "I {P} to {V} the {N} on my own, which was {A}.",
       "It took me {#} tries to get the {N} right.",
       "The {N} broke {#} times and I {P} it every time.",
       "I {D} wanted to quit, but my {R} wouldn't let me.",
       "On weekends I {P} at the {L} and {P} the {N} with my {R}.",
       "I didn't know much about {N}, so I {P} videos and asked my {R}.",
       "Our {L} was {A} and loud, but that's where I {P} to {V}.",
       "My {R} {P} to the {L} with me and we {P} the whole {N}.",
       "I felt {A} when the {N} finally worked.",
       "I got a {A} grade on the {N}, which was {D} {A}.",
       "We {P} pizza and {P} the {N} until it was dark.",
       "Nobody in my family had done a {N} like that before.",
       "It was {A} and {A}, but I {P} a lot from it.",
       "I {P} my {R} for help and she {P} me the {N}.",
       "The {L} smelled like oil and the {N} was always {A}."},
      // closers
      {"That's why I want to study engineering, because I like to {V} things that help people like my {R}.",
       "I still have the {N} in my room and it reminds me why I started.",
       "Looking back, I think the {N} {P} me more than I {P} it.",
       "I'm ready to {V} more {N} in college and I can't wait."},
      // nouns
      {"mom", "dad", "grandma", "grandpa", "brother", "sister", "cousin", "garage", "backyard", "kitchen",
       "bus", "bike", "pizza", "soccer", "basketball", "guitar", "phone", "homework", "weekend", "job",
       "shift", "paycheck", "car", "dog", "church", "neighborhood", "apartment", "store", "restaurant", "money",
       "cafeteria", "locker", "tacos", "tv", "video", "stuff", "truck", "fridge", "couch", "notebook"},
      // adjectives
      {"awesome", "cool", "weird", "tough", "scary", "fun", "tired", "nervous", "crazy", "funny",
       "boring", "huge", "tiny", "messy", "annoying", "dumb", "broke", "loud", "happy", "sad"},
      // adverbs
      {"really", "pretty", "kinda", "basically", "honestly", "totally", "super", "actually", "literally", "probably"},
      // people
      {"mom", "dad", "grandma", "grandpa", "brother", "sister", "cousin", "uncle", "aunt", "buddy"},
      // places
      {"garage", "backyard", "kitchen", "basement", "store", "restaurant", "church", "bus", "apartment", "shop"},
      // verbs
      {{"grab", "grabbed"}, {"mess", "messed"}, {"yell", "yelled"}, {"figure", "figured"}, {"freak", "freaked"},
       {"hang", "hung"}, {"drive", "drove"}, {"fix", "fixed"}, {"cook", "cooked"}, {"play", "played"},
       {"watch", "watched"}, {"text", "texted"}, {"cry", "cried"}, {"laugh", "laughed"}, {"lose", "lost"},
       {"quit", "quit"}, {"save", "saved"}, {"help", "helped"}, {"fail", "failed"}, {"get", "got"}},
      0.42,
      1.05,
      290,
      620,
  };
  return b;
}

const StyleBank& llm() {
  static const StyleBank b{
      // openers
      {"From a young age, I have been captivated by the {A} {N} of {N}.",
       "In the {A} {N} of my life, few experiences have been as {A} as my {N} with {N}.",
       "As I reflect on my {N}, I realize that every {N} has shaped the person I am today.",
       "The moment I first encountered {N}, I knew I had discovered a {A} {N}.",
       "Curiosity has always been the driving force behind my {N}.",
       "Every {N} begins with a single question, and mine began in a {A} {L}."},
      // body
      {"This {A} {N} allowed me to {V} a deeper understanding of {N}.",
       "Through this {N}, I learned to {V} {N} and {V} my {N}.",
       "It was a {A} {N} that would {D} {V} my {N}.",
       "I embraced the {N} with {A} {N} and a commitment to {V} {N}.",
       "This {N} taught me that {N} is not merely a {N}, but a {A} {N}.",
       "By working alongside my {R}, I began to {V} the {A} nature of {N}.",
       "Each {N} became an opportunity to {V} my {N} and {V} {N}.",
       "I {D} {P} that true {N} lies at the intersection of {N} and {N}.",
       "Navigating this {N} required both {A} {N} and {A} {N}.",
       "The {N} served as a {A} reminder of the {A} power of {N}.",
       "Moreover, it underscored the importance of {N} in every {N}.",
       "I sought to {V} a {A} {N} that would {V} the {N}.",
       "In doing so, I discovered a {A} passion for {N}.",
       "This {A} {N} has fueled my desire to {V} {N} in the field of engineering.",
       "As a result, I {P} a {A} {N} for the {A} {N} of {N}.",
       "The experience was a testament to the {A} {N} of {N}.",
       "I {D} {V} the {N}, knowing that every setback is a {A} {N}.",
       "Collaborating with my {R}, I {P} a {A} {N} to {V} the {N}.",
       "Together, we {P} a {A} {N} that {P} our {N}.",
       "I came to appreciate the {A} interplay between {N} and {N}.",
       "This {N} ignited a {A} curiosity that continues to {V} my {N}.",
       "It was not simply about {N}; it was about {N} and {N}.",
       "I learned that {N} requires {A} {N} and {A} {N}.",
       "Furthermore, the {N} challenged me to {V} beyond my {N}.",
       "Each {A} {N} brought me closer to my {N}.",
       "The {A} {N} of this {N} continues to {V} my {N} today.",
       "In the {L}, I {D} {P} the {A} {N} of {N}.",
       "This journey has been both {A} and {A}.",
       "I have come to view {N} as a {A} {N} for {N}.",
       "Such {A} moments remind me why I strive to {V} {N}."},
      // closers
      {"As I embark on the next chapter of my {N}, I am eager to {V} my {N} at your institution.",
       "Ultimately, this {N} has prepared me to {V} a {A} {N} in the world of engineering.",
       "I am confident that your {A} community will allow me to {V} my {N} and {V} {N}.",
       "With {A} {N}, I look forward to contributing to a {A} {N}."},
      // nouns
      {"tapestry", "journey", "resilience", "passion", "perspective", "growth", "realm", "endeavor", "testament", "landscape",
       "insight", "commitment", "curiosity", "innovation", "collaboration", "adversity", "potential", "aspiration",
       "foundation", "catalyst", "narrative", "dedication", "ingenuity", "empathy", "synergy", "trajectory", "framework",
       "paradigm", "milestone", "intersection", "determination", "perseverance", "creativity", "leadership", "impact",
       "understanding", "purpose", "integrity", "excellence", "vision"},
      // adjectives
      {"profound", "pivotal", "multifaceted", "intricate", "vibrant", "invaluable", "transformative", "meticulous",
       "holistic", "unwavering", "nuanced", "dynamic", "innovative", "remarkable", "diverse", "meaningful", "relentless",
       "boundless", "insightful", "enduring"},
      // adverbs
      {"deeply", "profoundly", "ultimately", "truly", "continually", "meaningfully", "inherently", "undeniably",
       "consistently", "genuinely"},
      // people
      {"peers", "mentors", "colleagues", "instructors", "advisors", "collaborators", "community", "peers"},
      // places
      {"laboratory", "classroom", "community", "workshop", "library", "makerspace", "competition", "conference", "studio", "hall"},
      // verbs
      {{"delve", "delved"}, {"foster", "fostered"}, {"navigate", "navigated"}, {"embark", "embarked"},
       {"underscore", "underscored"}, {"cultivate", "cultivated"}, {"harness", "harnessed"}, {"showcase", "showcased"},
       {"embrace", "embraced"}, {"illuminate", "illuminated"}, {"strive", "strove"}, {"empower", "empowered"},
       {"reshape", "reshaped"}, {"forge", "forged"}, {"ignite", "ignited"}, {"leverage", "leveraged"},
       {"envision", "envisioned"}, {"nurture", "nurtured"}, {"spark", "sparked"}, {"contribute", "contributed"}},
      0.45,
      1.0,
      320,
      600,
  };
  return b;
}

}  // namespace essaylens::refgen::bank
