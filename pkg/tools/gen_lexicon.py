"""One-off generator for src/infotriage/data/lexicon.txt.

Expands hand-picked positive/negative stems with regular inflections and
writes 'word<TAB>{+1|-1}' lines sorted alphabetically. Re-run only if the
stem lists change; the output is committed.
"""

from __future__ import annotations

POSITIVE_STEMS = """
able abundant accomplish accurate achieve admire adore advance advantage
affection agree amaze ambitious amuse appeal appreciate approve ardent
astonish astound attract authentic award awesome balanced beautiful believe
beloved benefit best better blessed bliss bloom bonus boost brave bright
brilliant calm capable care celebrate champion charm cheer cherish clean
clear clever comfort commend compassion competent complete confident
congratulate considerate constructive content convenient cool cooperate
courage courteous creative credible cure curious dazzle decent dedicate
delight dependable deserve desirable devote diligent distinguish divine
dynamic eager earnest ease ecstatic educate effective efficient effortless
elegant elevate eloquent embrace eminent empower enchant encourage endorse
energetic engage enhance enjoy enlighten enrich enthusiastic entice
excellent exceptional excite exemplary exhilarate exquisite extraordinary
exuberant fabulous fair faithful famous fancy fantastic fascinate favor
favorite fearless festive fine first-rate fit flatter flawless flourish fond
fortunate free fresh friendly fruitful fulfill fun funny generous genius
gentle genuine gift glad glamorous glee glorious glow good gorgeous grace
gracious grand grateful great grin groundbreaking grow guarantee handsome
handy happy harmonious heal healthy heartfelt heavenly helpful hero
high-quality hilarious honest honor hope hospitable humane humble ideal
imaginative important impress improve incredible ingenious innovative
insightful inspire integrity intelligent interesting intuitive invaluable
invigorate irresistible jolly joy jubilant keen kind laudable lavish lead
legendary light like likable lively love lovely loyal lucid lucky luminous
luxurious magical magnificent marvel master mature meaningful memorable
merciful merry meticulous mighty miracle modern modest motivate neat nice
noble notable nourish novel nurture optimal optimistic outstanding

paradise passionate patient peace perfect persevere phenomenal playful
pleasant please pleasurable plentiful poise polished polite popular positive
praise precious precise prefer premier prestige pretty priceless pristine
productive proficient profound progress promising prompt prosper protect
proud prudent pure quaint qualified quality radiant rapture rational
reassure recommend refine refresh regal rejoice reliable relish remarkable
renew renowned resilient resourceful respect restore revere revitalize
revolutionary reward rich right robust romantic safe satisfy savvy secure
seamless select sensational serene sharp shine significant sincere skilled
skillful sleek smart smile smooth soothe sparkle special spectacular splendid
stable steadfast stellar stimulate straightforward streamline striking strong
stunning stupendous sturdy stylish sublime succeed successful sufficient
suitable sunny superb superior support supreme sure sweet swift talented
tasty tender terrific thank thorough thoughtful thrill thrive tidy timely
top tough tranquil transparent treasure tremendous triumph trust truthful
unbeatable unbiased unforgettable unique uplift upstanding useful valiant
valuable versatile vibrant victorious vigilant virtuous vital vivacious vivid
warm wealthy welcome well-made whole wholesome win wise witty wonderful
wondrous workable worthwhile worthy zeal zest

adept admirable adorable affable agile alert alluring benevolent blissful
buoyant captivating charitable classy coherent colorful commendable
compelling composed cordial cozy delicious dignified durable empathetic
endearing enjoyable ethical euphoric flexible forgiving graceful hearty
heroic honorable hopeful immaculate impeccable impressive industrious
informative inspiring inventive inviting jovial joyful judicious majestic
masterful mellow mindful nimble orderly organized peaceful perceptive
persuasive powerful pragmatic prosperous punctual refreshing resolute
respectable responsive rewarding sensible spirited supportive sympathetic
tenacious thankful tolerant trustworthy upbeat vigorous visionary welcoming
"""

NEGATIVE_STEMS = """
abandon abhor abnormal abominable abrasive absurd abuse abysmal accuse ache
adverse afraid aggravate aggressive agitate agonize alarm alienate angry
anguish annoy anxious apathetic appall arbitrary arrogant ashamed atrocious
attack awful awkward backward bad baffle ban banal bankrupt barbaric barren
belittle betray bias bitter bizarre blame bland bleak blunder bogus bore
bother brash break broken brutal brute bug bully bungle burden careless
catastrophe chaos cheap cheat clumsy coarse cold collapse complain
complicate condemn confront confuse conspire contaminate contempt
contradict corrupt costly coward crash crazy creepy crime cripple crisis
critical crook crude cruel crush cumbersome curse cynical damage dangerous
dark daunt dead deadly deafen deceit deceive decline defame defeat defect
deficient deform degrade dejected delay delinquent delude demean demise
demolish demonize deny deplete deplorable depress deprive deride
despair desperate despicable despise destroy destructive deteriorate
detest devastate deviant devious dire dirty disable disadvantage disagree
disappoint disaster disbelief discomfort discourage disgrace disgust dishonest
dislike dismal dismay disorder disparage displease dispute disregard disrupt
distort distract distress disturb divisive dominate doom doubt drab drain
dread dreary dreadful dubious dull dumb dupe dysfunctional egregious
embarrass enrage erode err erratic evil exaggerate exasperate excessive
exhaust exploit expose fail fake fallacious false falter fatal fatigue fault
fear feeble fiasco fickle filthy flagrant flaw flee flimsy foolish forbid
forgery fractious fragile frantic fraud freak frighten frivolous frustrate
furious futile garbage gaudy ghastly gloomy greed grief grim gross
grotesque grudge gruesome guilt gullible halfhearted harass harm harsh hate
hazard heartbreaking heartless hideous hinder hoax hollow horrendous horrible
horrid horrify hostile humiliate hurt hypocritical idiotic ignorant ignore
ill illegal illicit immoral impair impatient imperfect impolite improper
impulsive inaccurate inadequate incompetent inconsistent inconvenient
indifferent inept inferior inflame infuriate insane insecure insidious insult
intimidate intolerant invalid irk irrational irritate jaded jealous jeopardy
junky lack lame lament lazy lethal liar lie limp lose loss lousy ludicrous
lure mad maddening malice malicious manipulate mar mediocre menace mess messy
miserable misery misguided mislead mistake mistrust misunderstand mock
monotonous monstrous moody mourn mundane murky naive nasty needless negative
neglect nervous noisy nonsense obnoxious obscure obsolete obstruct odious
offend ominous oppress outdated outrage overpriced overrated overwhelm pain
painful panic paltry pathetic peril pessimistic pest petty phony pitiful
plague poison poor precarious prejudice pretentious problem protest
provoke punish puzzling quarrel questionable quit rage rampant rant rash
reckless redundant refuse regress regret reject relentless reluctant remorse
repel reprehensible repress repugnant repulsive resent restrict retaliate
revile ridicule ridiculous rigid risky rot rotten rude rueful ruin rust sad
sarcastic savage scam scandal scare scorn scream second-rate selfish severe
shabby shallow shame shatter shock shoddy shortage shun sick sinister
skeptical slander slick sloppy slow sluggish smear smug sneaky snub sore
sorrow sorry spite spoil squander stagnant stale stall steal stereotype
stiff stink strain strange stress strict struggle stubborn stupid subpar
substandard suffer suspicious tacky taint tamper tarnish tedious terrible
terror threat timid tired toil torment torture toxic tragedy traitor trap
trash trauma treacherous trick trivial trouble turbulent turmoil ugly
unacceptable unbearable uncertain uncomfortable undermine undesirable uneasy
unethical unfair unfortunate unhappy unhealthy unjust unlucky unnecessary
unpleasant unpredictable unprofessional unreliable unsafe unstable unwanted
upset useless vague vengeful vicious vile villain violate violent volatile
vulgar vulnerable warp waste weak weary wicked withdraw woe worry worse
worst worthless wreck wrong
"""

VOWELS = set("aeiou")


def variants(stem: str) -> list[str]:
    out = [stem]
    if "-" in stem or " " in stem:
        return out
    # plural / 3rd person only; keeps the list near two entries per stem
    if stem.endswith(("s", "x", "z", "ch", "sh")):
        out.append(stem + "es")
    elif stem.endswith("y") and len(stem) > 2 and stem[-2] not in VOWELS:
        out.append(stem[:-1] + "ies")
    else:
        out.append(stem + "s")
    return out


def build() -> dict[str, int]:
    lex: dict[str, int] = {}
    for stems, value in ((POSITIVE_STEMS, 1), (NEGATIVE_STEMS, -1)):
        for stem in stems.split():
            for w in variants(stem):
                lex.setdefault(w, value)
    return lex


if __name__ == "__main__":
    lex = build()
    lines = [f"{w}\t{v:+d}" for w, v in sorted(lex.items())]
    with open("src/infotriage/data/lexicon.txt", "w", encoding="utf-8") as f:
        f.write("\n".join(lines) + "\n")
    pos = sum(1 for v in lex.values() if v > 0)
    print(f"{len(lex)} entries ({pos} positive, {len(lex) - pos} negative)")
