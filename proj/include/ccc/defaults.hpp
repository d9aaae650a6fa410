#pragma once

// Generated by tools/gen_defaults.py from data/*.json. Do not edit.

namespace ccc::defaults {

inline constexpr const char* kVocabularyJson = R"json({"activities":["skiing","snowboarding","surfing","hiking","camping","cycling","swimming","fishing","kayaking","running","skateboarding","picnicking","sailing","climbing"],"locations":["beach","mountains","lake","park","forest","desert","city","countryside","river","backyard","harbor","canyon","island"],"objects":["backpack","ball","bicycle","boat","cake","campfire","dog","flowers","frisbee","goggles","guitar","hat","helmet","kayak","kite","lantern","map","paddle","rope","sandwich","skateboard","skis","sled","snowboard","snowman","sunglasses","surfboard","tent","towel","umbrella"],"participants":["mom","dad","grandma","grandpa","alex","sam","emma","olivia","noah","mia","liam","jack"],"times":["2014","2015","2016","2017","2018","2019","2020","2021","2022","2023","spring","summer","autumn","winter","january","february","march","april","may","june","july","august","september","october","november","december"],"attributes":["cloudy","colorful","foggy","golden","nighttime","rainy","snowy","starry","sunny","sunrise","sunset","windy"],"cooccurrence":{"skiing":{"objects":[{"label":"skis","weight":0.3},{"label":"goggles","weight":0.25},{"label":"helmet","weight":0.15},{"label":"backpack","weight":0.12},{"label":"hat","weight":0.1},{"label":"sled","weight":0.08}],"locations":[{"label":"mountains","weight":0.5},{"label":"forest","weight":0.3},{"label":"canyon","weight":0.2}],"attributes":[{"label":"snowy","weight":0.3},{"label":"sunny","weight":0.25},{"label":"foggy","weight":0.2},{"label":"cloudy","weight":0.15},{"label":"sunrise","weight":0.1}]},"snowboarding":{"objects":[{"label":"snowboard","weight":0.3},{"label":"goggles","weight":0.25},{"label":"helmet","weight":0.15},{"label":"hat","weight":0.12},{"label":"backpack","weight":0.1},{"label":"snowman","weight":0.08}],"locations":[{"label":"mountains","weight":0.5},{"label":"forest","weight":0.3},{"label":"canyon","weight":0.2}],"attributes":[{"label":"snowy","weight":0.3},{"label":"sunny","weight":0.25},{"label":"cloudy","weight":0.2},{"label":"windy","weight":0.15},{"label":"sunset","weight":0.1}]},"surfing":{"objects":[{"label":"surfboard","weight":0.3},{"label":"towel","weight":0.25},{"label":"sunglasses","weight":0.15},{"label":"umbrella","weight":0.12},{"label":"hat","weight":0.1},{"label":"kite","weight":0.08}],"locations":[{"label":"beach","weight":0.5},{"label":"island","weight":0.3},{"label":"harbor","weight":0.2}],"attributes":[{"label":"sunny","weight":0.3},{"label":"sunset","weight":0.25},{"label":"windy","weight":0.2},{"label":"golden","weight":0.15},{"label":"cloudy","weight":0.1}]},"hiking":{"objects":[{"label":"backpack","weight":0.3},{"label":"map","weight":0.25},{"label":"hat","weight":0.15},{"label":"dog","weight":0.12},{"label":"sunglasses","weight":0.1},{"label":"rope","weight":0.08}],"locations":[{"label":"mountains","weight":0.4},{"label":"forest","weight":0.3},{"label":"canyon","weight":0.2},{"label":"desert","weight":0.1}],"attributes":[{"label":"sunny","weight":0.3},{"label":"foggy","weight":0.25},{"label":"sunrise","weight":0.2},{"label":"cloudy","weight":0.15},{"label":"golden","weight":0.1}]},"camping":{"objects":[{"label":"tent","weight":0.3},{"label":"campfire","weight":0.25},{"label":"lantern","weight":0.15},{"label":"backpack","weight":0.12},{"label":"guitar","weight":0.1},{"label":"dog","weight":0.08}],"locations":[{"label":"forest","weight":0.4},{"label":"lake","weight":0.3},{"label":"countryside","weight":0.2},{"label":"desert","weight":0.1}],"attributes":[{"label":"starry","weight":0.3},{"label":"nighttime","weight":0.25},{"label":"sunset","weight":0.2},{"label":"foggy","weight":0.15},{"label":"rainy","weight":0.1}]},"cycling":{"objects":[{"label":"bicycle","weight":0.3},{"label":"helmet","weight":0.25},{"label":"sunglasses","weight":0.15},{"label":"backpack","weight":0.12},{"label":"map","weight":0.1},{"label":"dog","weight":0.08}],"locations":[{"label":"city","weight":0.4},{"label":"countryside","weight":0.3},{"label":"park","weight":0.2},{"label":"river","weight":0.1}],"attributes":[{"label":"sunny","weight":0.3},{"label":"cloudy","weight":0.25},{"label":"windy","weight":0.2},{"label":"sunrise","weight":0.15},{"label":"rainy","weight":0.1}]},"swimming":{"objects":[{"label":"towel","weight":0.3},{"label":"goggles","weight":0.25},{"label":"ball","weight":0.15},{"label":"umbrella","weight":0.12},{"label":"sunglasses","weight":0.1},{"label":"kite","weight":0.08}],"locations":[{"label":"beach","weight":0.4},{"label":"lake","weight":0.3},{"label":"river","weight":0.2},{"label":"island","weight":0.1}],"attributes":[{"label":"sunny","weight":0.3},{"label":"golden","weight":0.25},{"label":"sunset","weight":0.2},{"label":"cloudy","weight":0.15},{"label":"colorful","weight":0.1}]},"fishing":{"objects":[{"label":"boat","weight":0.3},{"label":"paddle","weight":0.25},{"label":"hat","weight":0.15},{"label":"sandwich","weight":0.12},{"label":"lantern","weight":0.1},{"label":"dog","weight":0.08}],"locations":[{"label":"lake","weight":0.5},{"label":"river","weight":0.3},{"label":"harbor","weight":0.2}],"attributes":[{"label":"foggy","weight":0.3},{"label":"sunrise","weight":0.25},{"label":"cloudy","weight":0.2},{"label":"golden","weight":0.15},{"label":"rainy","weight":0.1}]},"kayaking":{"objects":[{"label":"kayak","weight":0.3},{"label":"paddle","weight":0.25},{"label":"helmet","weight":0.15},{"label":"towel","weight":0.12},{"label":"sunglasses","weight":0.1},{"label":"map","weight":0.08}],"locations":[{"label":"river","weight":0.4},{"label":"lake","weight":0.3},{"label":"harbor","weight":0.2},{"label":"canyon","weight":0.1}],"attributes":[{"label":"sunny","weight":0.3},{"label":"sunrise","weight":0.25},{"label":"foggy","weight":0.2},{"label":"windy","weight":0.15},{"label":"colorful","weight":0.1}]},"running":{"objects":[{"label":"sunglasses","weight":0.3},{"label":"hat","weight":0.25},{"label":"dog","weight":0.15},{"label":"towel","weight":0.12},{"label":"ball","weight":0.1},{"label":"map","weight":0.08}],"locations":[{"label":"park","weight":0.4},{"label":"city","weight":0.3},{"label":"beach","weight":0.2},{"label":"river","weight":0.1}],"attributes":[{"label":"sunrise","weight":0.3},{"label":"rainy","weight":0.25},{"label":"cloudy","weight":0.2},{"label":"sunny","weight":0.15},{"label":"windy","weight":0.1}]},"skateboarding":{"objects":[{"label":"skateboard","weight":0.3},{"label":"helmet","weight":0.25},{"label":"hat","weight":0.15},{"label":"ball","weight":0.12},{"label":"sunglasses","weight":0.1},{"label":"guitar","weight":0.08}],"locations":[{"label":"city","weight":0.5},{"label":"park","weight":0.3},{"label":"backyard","weight":0.2}],"attributes":[{"label":"sunny","weight":0.3},{"label":"colorful","weight":0.25},{"label":"sunset","weight":0.2},{"label":"nighttime","weight":0.15},{"label":"cloudy","weight":0.1}]},"picnicking":{"objects":[{"label":"sandwich","weight":0.3},{"label":"cake","weight":0.25},{"label":"umbrella","weight":0.15},{"label":"frisbee","weight":0.12},{"label":"flowers","weight":0.1},{"label":"dog","weight":0.08}],"locations":[{"label":"park","weight":0.4},{"label":"backyard","weight":0.3},{"label":"countryside","weight":0.2},{"label":"lake","weight":0.1}],"attributes":[{"label":"sunny","weight":0.3},{"label":"colorful","weight":0.25},{"label":"golden","weight":0.2},{"label":"sunset","weight":0.15},{"label":"cloudy","weight":0.1}]},"sailing":{"objects":[{"label":"boat","weight":0.3},{"label":"rope","weight":0.25},{"label":"sunglasses","weight":0.15},{"label":"hat","weight":0.12},{"label":"towel","weight":0.1},{"label":"kite","weight":0.08}],"locations":[{"label":"harbor","weight":0.4},{"label":"lake","weight":0.3},{"label":"island","weight":0.2},{"label":"beach","weight":0.1}],"attributes":[{"label":"windy","weight":0.3},{"label":"sunny","weight":0.25},{"label":"sunset","weight":0.2},{"label":"golden","weight":0.15},{"label":"foggy","weight":0.1}]},"climbing":{"objects":[{"label":"rope","weight":0.3},{"label":"helmet","weight":0.25},{"label":"backpack","weight":0.15},{"label":"map","weight":0.12},{"label":"sunglasses","weight":0.1},{"label":"frisbee","weight":0.08}],"locations":[{"label":"canyon","weight":0.4},{"label":"mountains","weight":0.3},{"label":"desert","weight":0.2},{"label":"forest","weight":0.1}],"attributes":[{"label":"sunny","weight":0.3},{"label":"sunrise","weight":0.25},{"label":"windy","weight":0.2},{"label":"starry","weight":0.15},{"label":"golden","weight":0.1}]}}})json";

inline constexpr const char* kLexiconJson = R"json({"trigger_priority":["CREATE_STORY","REPLACE_CLIPS","REFINE_SEARCH","REORDER_CLIPS","MODIFY_DURATION","ADD_CLIPS","REMOVE_CLIPS","SHARE_STORY"],"triggers":{"CREATE_STORY":["create a story","put together a new story","make a story","create a montage"],"ADD_CLIPS":["add","include","throw in"],"REMOVE_CLIPS":["remove","delete","get rid of","take out"],"REPLACE_CLIPS":["replace","replace it with","swap","switch out"],"REORDER_CLIPS":["move","shift","reorder"],"REFINE_SEARCH":["refine","narrow it down","update the search"],"MODIFY_DURATION":["seconds long","trim","duration of","shorter","longer","lasts"],"SHARE_STORY":["share","send"]},"ordinals":{"first":1,"second":2,"third":3,"fourth":4,"fifth":5,"sixth":6,"seventh":7,"eighth":8,"ninth":9,"tenth":10,"eleventh":11,"twelfth":12,"last":-1,"second to the last":-2,"third to the last":-3},"mention_heads":["clip","clips","one","ones","video","videos"],"device_phrases":["the one I'm currently viewing","the one I'm viewing","the clip I'm viewing","the current clip"],"carryover_phrases":["the one I added earlier","the one I mentioned earlier","the clip from earlier"],"reference_cues":["similar to"],"position_phrases":{"first":["to the beginning","at the beginning","to the front"],"last":["to the end","at the end"],"before":["before"],"after":["after"]},"duration_changes":{"shorter":["shorter"],"longer":["longer"]},"duration_units":["seconds","second"],"share_targets":["family","friends","coworkers","classmates","neighbors","teammates"],"filter_phrases":{"time":" in {v}","location":" at the {v}","participant":" with {v}","object":" featuring {v}","attribute":" with {v} scenery"},"realize_positions":{"ADD_CLIPS":{"first":"at the beginning","last":"at the end","before":"right before {anchor}","after":"right after {anchor}"},"REORDER_CLIPS":{"first":"to the beginning","last":"to the end","before":"right before {anchor}","after":"right after {anchor}"}},"templates":{"REQUEST:CREATE_STORY":["Create a story of all {activity} trips{filters}","Can you put together a new story with my {activity} moments{filters} please","I would like to make a story out of my {activity} videos{filters}","Please create a montage of my {activity} clips{filters} for me","Create a story from {query} in my collection","Can you put together a new story with {query} please","I would like to make a story out of {query} from my collection"],"REQUEST:ADD_CLIPS":["Please add some {query} to my story","Can you also include a few {query} in this story","I want to add more {query} to the montage as well","Please add some {query} {position}","Can you include a few {query} {position} please","I want to add more {query} {position} in the story"],"REQUEST:REMOVE_CLIPS":["Please remove {target} from the story","Can you delete {target} from my montage please","Get rid of {target} in this story please"],"REQUEST:REPLACE_CLIPS":["Replace {target} with some {query}","Can you swap {target} for a few {query} please","Please switch out {target} for some {query} from my collection","Replace {target} with something similar to {reference}","Can you swap {target} for another clip similar to {reference}","Remove {target} and replace it with something similar to {reference}"],"REQUEST:REORDER_CLIPS":["Move {target} {position}","Could you shift {target} {position} in the montage please","I think {target} should go {position} so please reorder it"],"REQUEST:REFINE_SEARCH":["Actually can you refine the search to only {query}","Let's narrow it down to {query} instead","Please update the search so it only shows {query}"],"REQUEST:MODIFY_DURATION":["Make {target} {seconds} seconds long","Can you trim {target} so it lasts {seconds} seconds","Please change the duration of {target} to {seconds} seconds","Make {target} a little {change} please","Can you make {target} a bit {change} in the story","I think {target} should be {change} than it is now"],"REQUEST:SHARE_STORY":["Share this story with my {share_to}","Can you send the montage to my {share_to} please","Please share the finished story with all of my {share_to} now"],"INFORM:CREATE_STORY:ok":["I created a new story with {clips} from your collection","Here is your new story, I found {clips} that match your request","Your story is ready and it contains {clips} from your memories"],"INFORM:ADD_CLIPS:ok":["Done, I added {clips} to your story as requested","I found {clips} and added them to the montage for you","Okay, I have added {clips} to your current story"],"INFORM:REMOVE_CLIPS:ok":["Done, I removed {clips} from your story.","Okay, I took {clips} out of the current montage for you","Sure, I have removed {clips} from your story as requested"],"INFORM:REPLACE_CLIPS:ok":["Done, I replaced the clip with a new one from your collection","I swapped it out and made {count} changes to your story","Okay, the replacement is done and your story has been updated"],"INFORM:REORDER_CLIPS:ok":["Done, I moved the clip to its new position in the story","Okay, the clip has been moved and the order is updated","Sure, I rearranged the story so the clip is where you wanted"],"INFORM:REFINE_SEARCH:ok":["I refined the search and made {count} changes to your story","Okay, your story now only has clips that match the new search","Done, I updated the story based on your refined search criteria"],"INFORM:MODIFY_DURATION:ok":["Done, I changed the duration of that clip in your story","Okay, the clip length has been adjusted as you asked","Sure, I updated how long that clip plays in the montage"],"INFORM:SHARE_STORY:ok":["Your story has been shared, I hope they enjoy watching it","Done, I sent the montage and they should receive it shortly","Okay, the story is now shared with the people you picked"],"INFORM:*:no_results":["Sorry, I could not find any clips in your collection that match that","Unfortunately there are no clips in your collection matching that request","I looked through your memories but nothing fits that description"],"INFORM:*:invalid_ref":["Sorry, I could not find that clip in your current story","I am not sure which clip you mean, it is not in the story","That clip does not seem to be part of your story right now"]},"clarification":["Sorry, I did not quite get that, could you please rephrase your request","I am not sure what you would like me to do with your story, can you say it differently"]})json";

}  // namespace ccc::defaults
